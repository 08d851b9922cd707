"""Right-hand sides of the equivalent formulations and their consistency.

Two evolution forms are implemented: the transport-like u-form

    u_t = -(u^2 + u_x^2/3) u_x + P(D)F1 + dx P(D)F2 + dx^2 P(D)F3,

with P(D) = (1 - dx^2)^{-2}, and the momentum n-form (n = (1 - dx^2)u)

    n_t = -(u^2 + u_x^2) n_x + P1(D)G1 + dx P1(D)G2 + dx^2 P1(D)G3,

with P1(D) = (1 - dx^2)^{-1}.  formulation_residual measures how far the
two are from each other, and how far both are from the raw fifth-order
form; these residuals are the package's certificate that the flux
coefficients are internally consistent.

All cubic monomials are evaluated on a 2x zero-padded grid with one
padding/truncation round per monomial, which keeps the round-off pattern
of every assembled flux reproducible.  A half-spectrum (rfft) pipeline is
used internally; fields are real throughout.
"""

from dataclasses import dataclass

import numpy as np

from .spectral_core import GridSpec, SpectralField

__all__ = [
    "FluxSetF",
    "FluxSetG",
    "NonFiniteFieldError",
    "default_flux_f",
    "default_flux_g",
    "rhs_u",
    "rhs_n",
    "formulation_residual",
]


class NonFiniteFieldError(RuntimeError):
    """Raised when an evolution right-hand side stops being finite."""

    def __init__(self, scale: float):
        super().__init__(f"non-finite right-hand side (field scale {scale:.3e})")
        self.scale = scale


_WS_CACHE: dict = {}


def _ws(grid: GridSpec) -> dict:
    """Per-grid constants of the half-spectrum pipeline."""
    if grid not in _WS_CACHE:
        n = grid.N_grid
        xi = 2.0 * np.pi * np.fft.rfftfreq(n, d=grid.dx)
        ph_c = 1.0 - 2.0 * (np.arange(n // 2 + 1) % 2)
        ph_f = 1.0 - 2.0 * (np.arange(n + 1) % 2)
        p1 = 1.0 / (1.0 + xi**2)
        keep = np.ones(n // 2 + 1, dtype=bool)
        keep[n // 2] = False
        if grid.dealias_cut < 1.0:
            keep &= xi <= grid.dealias_cut * grid.nyquist
        _WS_CACHE[grid] = {
            "xi": xi, "ph_c": ph_c, "ph_f": ph_f,
            "p1": p1, "p": p1 * p1, "keep": keep,
        }
    return _WS_CACHE[grid]


def _half(u: SpectralField) -> np.ndarray:
    return u.modes[: u.grid.N_grid // 2 + 1].copy()


def _field(grid: GridSpec, mh: np.ndarray) -> SpectralField:
    w = _ws(grid)
    s = np.fft.irfft(w["ph_c"] * mh, grid.N_grid) / grid.dx
    return SpectralField.from_samples(grid, s)


def _fine(grid: GridSpec, mh: np.ndarray) -> np.ndarray:
    """Field samples on the 2x padded grid (exact upsampling)."""
    n = grid.N_grid
    w = _ws(grid)
    out = np.zeros(n + 1, dtype=complex)
    out[: n // 2] = mh[: n // 2]
    return np.fft.irfft(w["ph_f"] * out, 2 * n) * (2 * n / grid.L)


def _mono(grid: GridSpec, f1, f2, f3) -> np.ndarray:
    """One cubic monomial: multiply on the fine grid, truncate, dealias."""
    n = grid.N_grid
    w = _ws(grid)
    mf = np.fft.rfft(f1 * f2 * f3) * (grid.L / (2 * n)) * w["ph_f"]
    mh = mf[: n // 2 + 1]
    mh[~w["keep"]] = 0.0
    return mh


def _half_l2(grid: GridSpec, mh: np.ndarray) -> float:
    w2 = np.full(mh.shape[0], 2.0)
    w2[0] = 1.0
    w2[-1] = 1.0
    return float(np.sqrt(np.sum(w2 * np.abs(mh) ** 2) / grid.L))


def _u_monomials(grid: GridSpec, uh: np.ndarray) -> dict:
    """The nine cubic monomials entering the u-form fluxes and transport."""
    w = _ws(grid)
    ixi = 1j * w["xi"]
    uxh = ixi * uh
    uxxh = ixi * uxh
    uf, uxf, uxxf = _fine(grid, uh), _fine(grid, uxh), _fine(grid, uxxh)
    return {
        "ux3": _mono(grid, uxf, uxf, uxf),
        "u3": _mono(grid, uf, uf, uf),
        "u_ux2": _mono(grid, uf, uxf, uxf),
        "u2_uxx": _mono(grid, uf, uf, uxxf),
        "ux2_uxx": _mono(grid, uxf, uxf, uxxf),
        "u_uxx2": _mono(grid, uf, uxxf, uxxf),
        "ux_uxx2": _mono(grid, uxf, uxxf, uxxf),
        "u_ux_uxx": _mono(grid, uf, uxf, uxxf),
        "u2_ux": _mono(grid, uf, uf, uxf),
        "_fines": (uf, uxf, uxxf),
    }


def _flux_f_modes(mono: dict, c_ux2uxx: float):
    f1 = mono["ux3"] / 3.0
    f2 = (
        -(5.0 / 3.0) * mono["u3"]
        - 5.0 * mono["u_ux2"]
        - 3.0 * mono["u2_uxx"]
        + c_ux2uxx * mono["ux2_uxx"]
        - mono["u_uxx2"]
    )
    f3 = mono["ux_uxx2"] + 4.0 * mono["u_ux_uxx"]
    return f1, f2, f3


def _flux_g_modes(mono: dict):
    g1 = 2.0 * mono["ux_uxx2"]
    g2 = (
        -(5.0 / 3.0) * mono["u3"]
        - 2.0 * mono["u_ux2"]
        - 3.0 * mono["u2_uxx"]
        + 16.0 * mono["ux2_uxx"]
        - mono["u_uxx2"]
    )
    g3 = -mono["ux_uxx2"] - 2.0 * mono["u_ux_uxx"]
    return g1, g2, g3


def _smooth_combine(grid: GridSpec, sym, f1, f2, f3) -> np.ndarray:
    """sym*f1 + dx(sym*f2) + dx^2(sym*f3) in half modes."""
    ixi = 1j * _ws(grid)["xi"]
    return sym * f1 + ixi * (sym * f2) + ixi * (ixi * (sym * f3))


def rhs_u_half(grid: GridSpec, uh: np.ndarray, c_ux2uxx: float = 24.0) -> np.ndarray:
    w = _ws(grid)
    mono = _u_monomials(grid, uh)
    f1, f2, f3 = _flux_f_modes(mono, c_ux2uxx)
    transport = mono["u2_ux"] + mono["ux3"] / 3.0
    out = -transport + _smooth_combine(grid, w["p"], f1, f2, f3)
    if not np.all(np.isfinite(out)):
        raise NonFiniteFieldError(float(np.nanmax(np.abs(uh))))
    return out


def rhs_n_half(grid: GridSpec, nh: np.ndarray) -> np.ndarray:
    w = _ws(grid)
    uh = w["p1"] * nh
    mono = _u_monomials(grid, uh)
    uf, uxf, _ = mono["_fines"]
    nxf = _fine(grid, 1j * w["xi"] * nh)
    transport = _mono(grid, uf, uf, nxf) + _mono(grid, uxf, uxf, nxf)
    g1, g2, g3 = _flux_g_modes(mono)
    out = -transport + _smooth_combine(grid, w["p1"], g1, g2, g3)
    if not np.all(np.isfinite(out)):
        raise NonFiniteFieldError(float(np.nanmax(np.abs(nh))))
    return out


def rhs_u(u: SpectralField, c_ux2uxx: float = 24.0) -> SpectralField:
    """u-form right-hand side u_t; the flux coefficient hook exists only so
    tests can verify that coefficient errors are detectable."""
    return _field(u.grid, rhs_u_half(u.grid, _half(u), c_ux2uxx))


def rhs_n(n: SpectralField) -> SpectralField:
    """n-form right-hand side n_t (u is recovered as the Helmholtz inverse)."""
    return _field(n.grid, rhs_n_half(n.grid, _half(n)))


def formulation_residual(u: SpectralField, c_ux2uxx: float = 24.0) -> dict:
    """Mutual-consistency residuals of the three forms.

    r12: relative L2 norm of (1-dx^2) rhs_u + (u^2+u_x^2) n_x - G(u),
    normalized by the sum of the three term norms.  r10: same for the raw
    fifth-order form with u_t := rhs_u.  Both vanish identically when the
    flux tables are transcribed correctly.
    """
    grid = u.grid
    w = _ws(grid)
    ixi = 1j * w["xi"]
    uh = _half(u)
    one = 1.0 + w["xi"] ** 2

    mono = _u_monomials(grid, uh)
    f1, f2, f3 = _flux_f_modes(mono, c_ux2uxx)
    transport_u = mono["u2_ux"] + mono["ux3"] / 3.0
    rhs = -transport_u + _smooth_combine(grid, w["p"], f1, f2, f3)

    uf, uxf, uxxf = mono["_fines"]
    nxf = _fine(grid, ixi * (one * uh))
    transport_n = _mono(grid, uf, uf, nxf) + _mono(grid, uxf, uxf, nxf)
    g1, g2, g3 = _flux_g_modes(mono)
    gpart = _smooth_combine(grid, w["p1"], g1, g2, g3)

    lhs = one * rhs
    resid12 = lhs + transport_n - gpart
    denom12 = (
        _half_l2(grid, lhs)
        + _half_l2(grid, transport_n)
        + _half_l2(grid, gpart)
    )
    r12 = _half_l2(grid, resid12) / denom12 if denom12 > 0 else 0.0

    uxxxh = ixi * (ixi * (ixi * uh))
    uxxxxh = ixi * uxxxh
    uxxxf, uxxxxf = _fine(grid, uxxxh), _fine(grid, uxxxxh)
    bracket = (
        2.0 * mono["u3"]
        + mono["u_ux2"]
        + mono["u2_uxx"]
        - 18.0 * mono["ux2_uxx"]
        + 3.0 * mono["u_uxx2"]
        + 4.0 * _mono(grid, uf, uxf, uxxxf)
        + _mono(grid, uf, uf, uxxxxf)
        + _mono(grid, uxxf, uxxf, uxxf)
        + 4.0 * _mono(grid, uxf, uxxf, uxxxf)
        + _mono(grid, uxf, uxf, uxxxxf)
    )
    lhs10 = one**2 * rhs
    flux10 = ixi * bracket
    resid10 = lhs10 + flux10
    denom10 = _half_l2(grid, lhs10) + _half_l2(grid, flux10)
    r10 = _half_l2(grid, resid10) / denom10 if denom10 > 0 else 0.0

    return {"r12": r12, "r10": r10}


def _flux_field(grid: GridSpec, mh: np.ndarray) -> SpectralField:
    return _field(grid, mh)


@dataclass(frozen=True)
class FluxSetF:
    """The three u-form fluxes as field-valued evaluators."""

    F1: object
    F2: object
    F3: object


@dataclass(frozen=True)
class FluxSetG:
    """The three n-form fluxes as field-valued evaluators."""

    G1: object
    G2: object
    G3: object


def default_flux_f(c_ux2uxx: float = 24.0) -> FluxSetF:
    def f1(u):
        mono = _u_monomials(u.grid, _half(u))
        return _flux_field(u.grid, _flux_f_modes(mono, c_ux2uxx)[0])

    def f2(u):
        mono = _u_monomials(u.grid, _half(u))
        return _flux_field(u.grid, _flux_f_modes(mono, c_ux2uxx)[1])

    def f3(u):
        mono = _u_monomials(u.grid, _half(u))
        return _flux_field(u.grid, _flux_f_modes(mono, c_ux2uxx)[2])

    return FluxSetF(f1, f2, f3)


def default_flux_g() -> FluxSetG:
    def g1(u):
        mono = _u_monomials(u.grid, _half(u))
        return _flux_field(u.grid, _flux_g_modes(mono)[0])

    def g2(u):
        mono = _u_monomials(u.grid, _half(u))
        return _flux_field(u.grid, _flux_g_modes(mono)[1])

    def g3(u):
        mono = _u_monomials(u.grid, _half(u))
        return _flux_field(u.grid, _flux_g_modes(mono)[2])

    return FluxSetG(g1, g2, g3)
