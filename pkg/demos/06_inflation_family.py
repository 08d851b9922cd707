"""The slow-log family: small data engineered to steepen fast.

Each member stacks N annulus packets whose amplitudes decay like
2^(-3j) j^(-2/3), plus an odd seed, all divided by ln N.  The overall
size shrinks like 1/ln N while the curvature at the origin grows like
N^(1/3)/ln N, so the slope-times-curvature product blows up relative to
the size: the engine of norm inflation.
"""

import math

from foch_lab import GridSpec
from foch_lab.norm_inflation import (
    build_g,
    build_psi,
    build_u0N,
    curv0_prediction,
    grid_for_level,
    inflation_scan,
)

grid = GridSpec(L=200.0, N_grid=8192)
psi = build_psi(grid)
seed = build_g(grid, 0.3)
print(f"bump profile moments: l2 {psi.l2:.6f}, second moment {psi.moment2:.6f}")
print(f"seed amplitude for target 0.3: {seed.amplitude:.6f}\n")

print("  N   h2 size    slope(0)   curv(0)     curv vs quadrature")
for n in (2, 3, 4, 5, 6):
    fam = build_u0N(n, psi, seed)
    pred = curv0_prediction(n, psi)
    print(
        f"  {n}  {fam.h2_0:9.5f}  {fam.slope0:9.5f}  {fam.curv0:+9.5f}"
        f"   {abs(fam.curv0 / pred - 1.0):.2e}"
    )

# deeper members need exponentially wider spectra
print("\ngrid sizes for the deep ladder:",
      {n: grid_for_level(n) for n in (6, 8, 10, 12)})

# a short scan: certificate constants plus a capped evolution per member
rows = inflation_scan([2, 4, 6], grid_n=8192, t_end=0.1, sample_stride=20)
print("\nscan rows (t_end = 0.1):")
print("  N   h12(n0)*lnN   product(0)   T1         outcome")
for r in rows:
    print(
        f"  {r.N}   {r.h12_n0 * math.log(r.N):10.6f}   {r.product0:+9.5f}"
        f"   {r.T1:.6f}   {r.termination}"
    )
