"""Dyadic frequency blocks and the norms built on them.

A field is split into blocks living on frequency annuli that double in
radius.  The blocks sum back to the (resolvable part of the) field, and
weighted sums of block sizes give the whole family of smoothness norms.
"""

import math

import numpy as np

from foch_lab import GridSpec, SpectralField, build_partition, dyadic_block
from foch_lab.littlewood_paley import BesovIndex, besov_norm, low_cut, sobolev_norm

grid = GridSpec(L=100.0, N_grid=2048)
part = build_partition(grid)
print(f"partition on |xi| <= {grid.nyquist:.1f}: blocks -1 .. {part.j_max}")

# a field with content in three well-separated octaves
u = SpectralField.from_samples(
    grid,
    np.exp(-(grid.x**2) / 16.0)
    * (np.cos(2.0 * grid.x) + 0.25 * np.cos(9.0 * grid.x) + 0.05 * np.cos(30.0 * grid.x)),
)

total = np.zeros(grid.N_grid)
for j in range(part.j_min, part.j_max + 1):
    block = dyadic_block(u, j, part)
    size = math.sqrt(np.sum(block.samples**2) * grid.dx)
    total += block.samples
    if size > 1e-12:
        print(f"block {j:+d}: L2 size {size:.5f}")

print("sum of blocks vs field:", f"{np.max(np.abs(total - u.samples)):.3e}")

# progressive low-pass: each step adds exactly one block
for j in (0, 2, 4):
    lo = low_cut(u, j, part)
    print(f"low cut through block {j}: L2 {math.sqrt(np.sum(lo.samples**2)*grid.dx):.5f}")

# the s-weighted block sums bracket the classical Sobolev size
for s in (0.5, 1.0, 2.0):
    b = besov_norm(u, BesovIndex(s, 2.0, 2.0), part)
    h = sobolev_norm(u, s)
    print(f"s={s}: dyadic {b:.5f}  classical {h:.5f}  ratio {b/h:.4f}")

# the weak end of the family only sees the largest block
weak = besov_norm(u, BesovIndex(0.0, math.inf, math.inf), part)
print("weakest norm (sup over blocks of sup):", f"{weak:.5f}")
