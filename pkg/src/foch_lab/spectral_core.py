"""Periodic spectral grid, Fourier-multiplier operators, and kernel oracles.

The grid carries a continuum-normalized transform: modes hold values of
u_hat(xi) = integral of u(x) exp(-i xi x) dx over the box, so multiplier
symbols and kernel identities read exactly as on the line.  All fields are
real; modes keep Hermitian symmetry.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "GridSpec",
    "SpectralField",
    "MultiplierSymbol",
    "OracleResult",
    "apply_multiplier",
    "derivative",
    "helmholtz",
    "p1_symbol",
    "p_symbol",
    "kernel_value",
    "kernel_convolution_oracle",
    "pad_modes",
    "truncate_modes",
    "dealias_modes",
    "product",
    "point_eval",
    "tail_mass_fraction",
    "boundary_amplitude",
]


@dataclass(frozen=True)
class GridSpec:
    """Periodic box [-L/2, L/2) sampled at N_grid points.

    dealias_cut is the retained fraction of the Nyquist band after nonlinear
    products; 1.0 keeps everything except the unpaired Nyquist mode.
    """

    L: float
    N_grid: int
    dealias_cut: float = 1.0

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError("box length must be positive")
        n = self.N_grid
        if n < 16 or (n & (n - 1)) != 0:
            raise ValueError("N_grid must be a power of two and >= 16")
        if not (0.0 < self.dealias_cut <= 1.0):
            raise ValueError("dealias_cut must lie in (0, 1]")

    @cached_property
    def dx(self) -> float:
        return self.L / self.N_grid

    @cached_property
    def x(self) -> np.ndarray:
        x = -0.5 * self.L + self.dx * np.arange(self.N_grid)
        x.setflags(write=False)
        return x

    @cached_property
    def xi(self) -> np.ndarray:
        xi = 2.0 * np.pi * np.fft.fftfreq(self.N_grid, d=self.dx)
        xi.setflags(write=False)
        return xi

    @cached_property
    def nyquist(self) -> float:
        return np.pi * self.N_grid / self.L

    @cached_property
    def phase(self) -> np.ndarray:
        # (-1)^k factor: the box starts at -L/2, not 0.
        p = 1.0 - 2.0 * (np.arange(self.N_grid) % 2)
        p.setflags(write=False)
        return p


def _hermitianize(modes: np.ndarray) -> np.ndarray:
    rev = np.conj(np.roll(modes[::-1], 1))
    return 0.5 * (modes + rev)


@dataclass(frozen=True)
class SpectralField:
    """Real periodic field with synchronized samples and modes."""

    grid: GridSpec
    samples: np.ndarray = field(repr=False)
    modes: np.ndarray = field(repr=False)

    @staticmethod
    def from_samples(grid: GridSpec, samples) -> "SpectralField":
        s = np.asarray(samples, dtype=float)
        if s.shape != (grid.N_grid,):
            raise ValueError("sample array does not match the grid")
        m = grid.dx * grid.phase * np.fft.fft(s)
        s = s.copy()
        s.setflags(write=False)
        m.setflags(write=False)
        return SpectralField(grid, s, m)

    @staticmethod
    def from_modes(grid: GridSpec, modes) -> "SpectralField":
        m = _hermitianize(np.asarray(modes, dtype=complex))
        if m.shape != (grid.N_grid,):
            raise ValueError("mode array does not match the grid")
        s = np.fft.ifft(grid.phase * m).real / grid.dx
        s.setflags(write=False)
        m.setflags(write=False)
        return SpectralField(grid, s, m)

    @staticmethod
    def zero(grid: GridSpec) -> "SpectralField":
        return SpectralField.from_samples(grid, np.zeros(grid.N_grid))

    def roundtrip_error(self) -> float:
        back = np.fft.ifft(self.grid.phase * self.modes).real / self.grid.dx
        scale = max(np.max(np.abs(self.samples)), 1e-300)
        return float(np.max(np.abs(back - self.samples)) / scale)


@dataclass(frozen=True)
class MultiplierSymbol:
    """Fourier multiplier m(D): a map from frequency to complex weight."""

    evaluator: object
    label: str

    def weights(self, xi: np.ndarray) -> np.ndarray:
        return np.asarray(self.evaluator(xi))

    __call__ = weights


def p1_symbol() -> MultiplierSymbol:
    """Symbol of the inverse Helmholtz operator, 1/(1+xi^2)."""
    return MultiplierSymbol(lambda xi: 1.0 / (1.0 + xi**2), "P1(D)")


def p_symbol() -> MultiplierSymbol:
    """Symbol of the squared inverse Helmholtz operator, 1/(1+xi^2)^2."""
    return MultiplierSymbol(lambda xi: 1.0 / (1.0 + xi**2) ** 2, "P(D)")


def apply_multiplier(u: SpectralField, m: MultiplierSymbol) -> SpectralField:
    w = m.weights(u.grid.xi)
    if not np.all(np.isfinite(w)):
        bad = u.grid.xi[~np.isfinite(np.asarray(w, dtype=complex))][0]
        raise ValueError(f"symbol {m.label!r} is non-finite at xi={bad!r}")
    return SpectralField.from_modes(u.grid, u.modes * w)


def derivative(u: SpectralField, k: int) -> SpectralField:
    """k-th spectral derivative; k applications of (i xi), so that
    derivative(u,1) twice is bit-identical to derivative(u,2)."""
    if not (0 <= k <= 4):
        raise ValueError("derivative order must be in 0..4")
    m = u.modes.copy()
    ik = 1j * u.grid.xi
    for _ in range(k):
        m = m * ik
    return SpectralField.from_modes(u.grid, m)


def deriv_modes(grid: GridSpec, modes: np.ndarray, k: int) -> np.ndarray:
    m = modes
    ik = 1j * grid.xi
    for _ in range(k):
        m = m * ik
    return m


def helmholtz(u: SpectralField, invert: bool = False) -> SpectralField:
    sym = 1.0 + u.grid.xi**2
    if invert:
        return SpectralField.from_modes(u.grid, u.modes / sym)
    return SpectralField.from_modes(u.grid, u.modes * sym)


def kernel_value(kernel_id: str, x) -> np.ndarray:
    """Closed-form convolution kernels of the two nonlocal operators."""
    ax = np.abs(x)
    if kernel_id == "half_exp":
        return 0.5 * np.exp(-ax)
    if kernel_id == "quarter_exp_poly":
        return 0.25 * np.exp(-ax) * (1.0 + ax)
    raise ValueError(f"unknown kernel {kernel_id!r}")


@dataclass(frozen=True)
class OracleResult:
    field: SpectralField
    boundary_ok: bool


def kernel_convolution_oracle(u: SpectralField, kernel_id: str) -> OracleResult:
    """Direct-quadrature convolution with the closed-form kernel.

    Independent of the FFT path; intended purely as a cross-check for
    apply_multiplier.  The half_exp kernel has a slope jump at the origin,
    which caps plain trapezoid summation at O(dx^2); the Euler-Maclaurin
    term for that jump is dx^2/12 times the field, and is subtracted so the
    oracle reaches the advertised 1e-6 agreement.
    """
    g = u.grid
    s = u.samples
    scale = max(np.max(np.abs(s)), 1e-300)
    edge = max(np.max(np.abs(s[:8])), np.max(np.abs(s[-8:])))
    boundary_ok = bool(edge <= 1e-10 * scale)
    offsets = np.arange(-(g.N_grid - 1), g.N_grid) * g.dx
    row = kernel_value(kernel_id, offsets)
    conv = g.dx * np.convolve(s, row)[g.N_grid - 1 : 2 * g.N_grid - 1]
    if kernel_id == "half_exp":
        conv = conv - (g.dx**2 / 12.0) * s
    return OracleResult(SpectralField.from_samples(g, conv), boundary_ok)


def pad_modes(grid: GridSpec, modes: np.ndarray, m_fine: int) -> np.ndarray:
    """Zero-pad a mode array to m_fine entries (same continuum values)."""
    n = grid.N_grid
    half = n // 2
    out = np.zeros(m_fine, dtype=complex)
    out[:half] = modes[:half]
    out[m_fine - half + 1 :] = modes[half + 1 :]
    # the unpaired Nyquist bin never survives padding
    return out


def truncate_modes(modes_fine: np.ndarray, n_coarse: int) -> np.ndarray:
    m_fine = modes_fine.shape[0]
    half = n_coarse // 2
    out = np.zeros(n_coarse, dtype=complex)
    out[:half] = modes_fine[:half]
    out[half + 1 :] = modes_fine[m_fine - half + 1 :]
    return out


def dealias_modes(grid: GridSpec, modes: np.ndarray) -> np.ndarray:
    out = modes.copy()
    out[grid.N_grid // 2] = 0.0
    if grid.dealias_cut < 1.0:
        out[np.abs(grid.xi) > grid.dealias_cut * grid.nyquist] = 0.0
    return out


def _fine_grid(grid: GridSpec, factor: int) -> GridSpec:
    return GridSpec(grid.L, factor * grid.N_grid, grid.dealias_cut)


def fine_samples(grid: GridSpec, modes: np.ndarray, factor: int = 2) -> np.ndarray:
    """Samples of the field on a factor-times finer grid (exact upsampling)."""
    gf = _fine_grid(grid, factor)
    return np.fft.ifft(gf.phase * pad_modes(grid, modes, gf.N_grid)).real / gf.dx


def modes_from_fine(grid: GridSpec, samples_fine: np.ndarray) -> np.ndarray:
    """Transform fine-grid samples and truncate back, dealiased."""
    m_fine = samples_fine.shape[0]
    gf = GridSpec(grid.L, m_fine, grid.dealias_cut)
    mf = gf.dx * gf.phase * np.fft.fft(samples_fine)
    return dealias_modes(grid, truncate_modes(mf, grid.N_grid))


def product(factors, factor: int = 2) -> SpectralField:
    """Pointwise product of fields on a padded grid, truncated and dealiased.

    One padding/truncation round per product; a factor-2 pad is exact for
    the cubic monomials used throughout.
    """
    grid = factors[0].grid
    fine = np.ones(factor * grid.N_grid)
    for f in factors:
        if f.grid != grid:
            raise ValueError("product factors live on different grids")
        fine = fine * fine_samples(grid, f.modes, factor)
    return SpectralField.from_modes(grid, modes_from_fine(grid, fine))


def point_eval(grid: GridSpec, modes: np.ndarray, x) -> np.ndarray:
    """Trigonometric interpolation of a field at arbitrary points."""
    pts = np.atleast_1d(np.asarray(x, dtype=float))
    ker = np.exp(1j * np.outer(pts, grid.xi))
    vals = (ker @ modes).real / grid.L
    return vals if np.ndim(x) else float(vals[0])


def tail_mass_fraction(u: SpectralField) -> float:
    """Fraction of L2 mass carried by the top 10% of frequencies."""
    p = np.abs(u.modes) ** 2
    total = float(np.sum(p))
    if total == 0.0:
        return 0.0
    hot = np.abs(u.grid.xi) >= 0.9 * u.grid.nyquist
    return float(np.sum(p[hot]) / total)


def boundary_amplitude(u: SpectralField) -> float:
    """Relative field amplitude near the box edges (periodicity sentinel)."""
    s = u.samples
    scale = max(np.max(np.abs(s)), 1e-300)
    edge = max(np.max(np.abs(s[:8])), np.max(np.abs(s[-8:])))
    return float(edge / scale)
