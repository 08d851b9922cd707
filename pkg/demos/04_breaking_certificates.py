"""Wave-breaking certificates and the Riccati comparison argument.

From one snapshot of initial data the certificate derives a constant K,
a guaranteed existence window T1, and (when the data is steep enough) a
breaking horizon T2 from the comparison equation f' = -f^2/4 + K.  This
demo builds a certificate, then explores the comparison solution itself,
where the mechanics are visible in closed form.
"""

import math

import numpy as np

from foch_lab import GridSpec, SpectralField
from foch_lab.blowup_analysis import (
    build_certificate,
    predict_T2,
    riccati_bound,
    riccati_singularity_time,
    solve_riccati,
)

grid = GridSpec(L=100.0, N_grid=1024)
u0 = SpectralField.from_samples(grid, 0.05 * np.exp(-(grid.x**2)))
cert = build_certificate(u0, C1=0.4)

print("certificate for the 0.05 pulse:")
print(f"  h2 size      {cert.h2_0:.6f}")
print(f"  C0           {cert.C0:.6f}")
print(f"  K            {cert.K:.6f}")
print(f"  T1           {cert.T1:.6f}  (branch: {cert.t1_branch})")
print(f"  q0           {cert.q0:.6f}  at x0 = {cert.x0:.4f}")
print(f"  slope flag   {cert.cond_slope}, product flag {cert.cond_product}")
print(f"  T2           {cert.T2}  (needs q0 < -2 sqrt(K) = {-2*math.sqrt(cert.K):.3f})")

# the comparison ODE in a regime where breaking does happen
K, q0 = 4.0, -12.0
T2 = predict_T2(q0, K)
print(f"\ncomparison solution with K={K}, q0={q0}: T2 = {T2:.6f} (= ln(2)/2)")

ts = np.linspace(0.0, 0.98 * T2, 8)
print("envelope on the way down:", np.round(riccati_bound(ts, q0, K), 3))

# the numeric solve agrees with the closed form and locates the blow-up
ts_n, fs_n = solve_riccati(q0, K, 0.95 * T2, 1000)
err = np.max(np.abs(fs_n - riccati_bound(ts_n, q0, K)))
print(f"RK4 vs closed form, max error {err:.3e}")
print(f"adaptive singularity search: {riccati_singularity_time(q0, K):.8f} vs T2 {T2:.8f}")

# deeper initial slopes break sooner
print("\nq0 sweep (K = 4):")
for depth in (2.5, 3.0, 6.0, 12.0):
    q = -depth * math.sqrt(K)
    print(f"  q0 = {q:7.2f}:  T2 = {predict_T2(q, K):.5f}")
