"""Evolving a smooth pulse and watching the conserved quantities.

The solver advances the equation with an adaptive fourth-order scheme.
Two functionals are conserved exactly by the dynamics; their numerical
drift is a direct measure of integration quality.  The H^2 size also
obeys a hard a priori ceiling of sqrt(2) times its initial value.
"""

import math

import numpy as np

from foch_lab import GridSpec, SpectralField
from foch_lab.integrator import StepperConfig, run

grid = GridSpec(L=100.0, N_grid=2048)
u0 = SpectralField.from_samples(grid, 0.25 * np.exp(-(grid.x**2)))

cfg = StepperConfig(t_end=2.0, dt_init=0.05, sample_stride=20, snapshot_stride=0)
result = run(u0, cfg)
print(f"run: {result.termination} at t = {result.t_final}, {len(result.dt_log)} steps")

rows = list(zip(result.times, result.diagnostics))
E0, F0 = rows[0][1].E, rows[0][1].F
print("\n   t       E drift      F drift      h2 / h2(0)   q_min")
for t, rep in rows:
    print(
        f"  {t:5.2f}  {abs(rep.E - E0) / E0:11.3e}  {abs(rep.F - F0) / F0:11.3e}"
        f"  {rep.h2 / rows[0][1].h2:10.6f}  {rep.q_min:+.5f}"
    )

h2s = [rep.h2 for _, rep in rows]
print("\nceiling check: max h2 / h2(0) =", max(h2s) / h2s[0],
      "<= sqrt(2) =", math.sqrt(2.0))

# halving the step size: the drift should fall by ~16x (4th order)
for dt in (0.5, 0.25):
    res = run(u0, StepperConfig(t_end=2.0, dt_init=dt, cfl=1e9,
                                sample_stride=1000, snapshot_stride=0))
    Es = [d.E for d in res.diagnostics]
    print(f"fixed dt={dt}: E drift {abs(Es[-1] - Es[0]) / Es[0]:.3e}")
