"""Smoothing multipliers and their explicit convolution kernels.

The two smoothing operators at the heart of the model are Fourier
multipliers 1/(1+xi^2) and 1/(1+xi^2)^2.  Both have closed-form kernels
on the line, so the spectral route can be checked against plain
quadrature convolution.
"""

import numpy as np

from foch_lab import GridSpec, SpectralField
from foch_lab.spectral_core import (
    apply_multiplier,
    derivative,
    kernel_convolution_oracle,
    kernel_value,
    p1_symbol,
    p_symbol,
)

grid = GridSpec(L=100.0, N_grid=4096)
print(f"grid: box length {grid.L}, {grid.N_grid} points, dx = {grid.dx:.4f}")

# the kernels at the origin: 1/2 for the single inverse, 1/4 for the square
print("kernel values at 0:", kernel_value("half_exp", 0.0),
      kernel_value("quarter_exp_poly", 0.0))

x = np.linspace(0.0, 5.0, 6)
print("half_exp kernel on [0,5]:", np.round(kernel_value("half_exp", x), 6))

# spectral application vs. direct convolution with the kernel
u = SpectralField.from_samples(grid, np.exp(-(grid.x**2)) * np.cos(3.0 * grid.x))

for name, symbol in (("half_exp", p1_symbol()), ("quarter_exp_poly", p_symbol())):
    spectral = apply_multiplier(u, symbol)
    oracle = kernel_convolution_oracle(u, name)
    err = np.sqrt(np.sum((spectral.samples - oracle.field.samples) ** 2) * grid.dx)
    print(f"{name}: spectral vs kernel convolution, L2 error {err:.3e}")

# derivatives are exact in the mode basis; compare with finite differences
du = derivative(u, 1).samples
s = u.samples
fd = (-np.roll(s, -2) + 8 * np.roll(s, -1) - 8 * np.roll(s, 1) + np.roll(s, 2)) / (
    12 * grid.dx
)
print("spectral derivative vs 4th-order differences:",
      f"{np.max(np.abs(du - fd)):.3e} (max over the grid)")
