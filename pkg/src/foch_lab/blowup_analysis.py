"""Quantitative wave-breaking certificates and the Riccati comparison.

A certificate packages, for given initial data and a seed point x0, the
constants (C0, K, omega0, T1, T2) of the sufficient blow-up condition

    |u_0x(x0)| >= C0   and   u_0x(x0) u_0xx(x0) <= -2 omega0 sqrt(K),

together with flags saying whether the data actually satisfies it.  When
the flags hold, q = u_x u_xx along the characteristic through x0 is
dominated by the Riccati solution f' = -f^2/4 + K and reaches -infinity
no later than T2 <= T1.  The condition is sufficient only: a certificate
with failing flags says "not covered", never "no blow-up".
"""

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .diagnostics import q_minimum, track_characteristic
from .littlewood_paley import (
    BesovIndex,
    besov_norm,
    build_partition,
    sobolev_norm,
)
from .spectral_core import SpectralField, deriv_modes, helmholtz, point_eval

__all__ = [
    "BlowupCertificate",
    "ValidationRecord",
    "build_certificate",
    "predict_T2",
    "riccati_bound",
    "solve_riccati",
    "riccati_singularity_time",
    "validate_prediction",
]


@dataclass(frozen=True)
class BlowupCertificate:
    x0: float
    h2_0: float
    C0: float
    C1: float
    C_wp: float
    K: float
    omega0: float
    T1: float
    T2: float
    q0: float
    ux0: float
    b2n_0: float
    besov_s: float
    t1_branch: str
    cond_slope: bool
    cond_product: bool
    K_positive: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def build_certificate(
    u0: SpectralField,
    x0: float = None,
    C1: float = 0.4,
    C_wp: float = 1.0,
    s: float = 2.0,
    part=None,
) -> BlowupCertificate:
    """Certificate constants for u0 at x0 (default: argmin of q over the grid).

    K = 34 h^4 - C0^4/8 + (3025/(4 C0^2)) h^6 with h = ||u0||_{H^2} and
    C0 = C1 h; T1 = min(C0/(32 h^3), 1/(4 C_wp^3 ||n0||^2_{B^s_22})).
    """
    if not (0.0 < C1 < 0.5):
        raise ValueError("C1 must lie in (0, 1/2)")
    if C_wp < 1.0:
        raise ValueError("C_wp must be at least 1")
    h2 = sobolev_norm(u0, 2.0)
    if h2 == 0.0:
        raise ValueError("zero initial data: C0 = 0 leaves K undefined")
    if x0 is None:
        x0 = q_minimum(u0)[1]
    grid = u0.grid
    if part is None:
        part = build_partition(grid)
    C0 = C1 * h2
    K = 34.0 * h2**4 - 0.125 * C0**4 + (3025.0 / (4.0 * C0**2)) * h2**6
    n0 = helmholtz(u0, invert=False)
    b2n = besov_norm(n0, BesovIndex(s, 2.0, 2.0), part)
    t1_slope = C0 / (32.0 * h2**3)
    t1_wp = 1.0 / (4.0 * C_wp**3 * b2n**2)
    if t1_slope <= t1_wp:
        T1, branch = t1_slope, "slope"
    else:
        T1, branch = t1_wp, "wellposedness"
    K_positive = K > 0.0
    sqrtK = math.sqrt(K) if K_positive else float("nan")
    omega0 = 1.0 + 2.0 / (T1 * sqrtK) if K_positive else float("nan")
    ux0 = point_eval(grid, deriv_modes(grid, u0.modes, 1), x0)
    uxx0 = point_eval(grid, deriv_modes(grid, u0.modes, 2), x0)
    q0 = ux0 * uxx0
    cond_slope = bool(abs(ux0) >= C0)
    cond_product = bool(K_positive and q0 <= -2.0 * omega0 * sqrtK)
    T2 = (
        predict_T2(q0, K)
        if K_positive and q0 < -2.0 * sqrtK
        else float("nan")
    )
    return BlowupCertificate(
        x0=float(x0),
        h2_0=h2,
        C0=C0,
        C1=C1,
        C_wp=C_wp,
        K=K,
        omega0=omega0,
        T1=T1,
        T2=T2,
        q0=float(q0),
        ux0=float(ux0),
        b2n_0=b2n,
        besov_s=s,
        t1_branch=branch,
        cond_slope=cond_slope,
        cond_product=cond_product,
        K_positive=K_positive,
    )


def predict_T2(q0: float, K: float) -> float:
    """Blow-up horizon (1/sqrt(K)) ln((-2 sqrt(K)+q0)/(2 sqrt(K)+q0))."""
    if K <= 0.0:
        raise ValueError("K must be positive")
    sqrtK = math.sqrt(K)
    if q0 >= -2.0 * sqrtK:
        raise ValueError("prediction needs q0 < -2 sqrt(K)")
    return math.log((-2.0 * sqrtK + q0) / (2.0 * sqrtK + q0)) / sqrtK


def riccati_bound(t, q0: float, K: float):
    """Closed-form solution of f' = -f^2/4 + K, f(0) = q0 < -2 sqrt(K)."""
    if K <= 0.0:
        raise ValueError("K must be positive")
    sqrtK = math.sqrt(K)
    if q0 >= -2.0 * sqrtK:
        raise ValueError("comparison needs q0 < -2 sqrt(K)")
    T2 = predict_T2(q0, K)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr >= T2):
        raise ValueError(f"singularity crossed: t >= T2 = {T2:.6e}")
    C = (2.0 * sqrtK - q0) / (2.0 * sqrtK + q0)
    e = np.exp(-sqrtK * t_arr)
    f = 2.0 * sqrtK * (1.0 - C * e) / (1.0 + C * e)
    return f if np.ndim(t) else float(f)


def solve_riccati(q0: float, K: float, t_end: float, n_steps: int):
    """RK4 integration of f' = -f^2/4 + K (cross-check for the closed form)."""
    f = q0
    dt = t_end / n_steps
    rhs = lambda v: -0.25 * v * v + K
    ts = [0.0]
    fs = [f]
    for _ in range(n_steps):
        k1 = rhs(f)
        k2 = rhs(f + 0.5 * dt * k1)
        k3 = rhs(f + 0.5 * dt * k2)
        k4 = rhs(f + dt * k3)
        f += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        ts.append(ts[-1] + dt)
        fs.append(f)
    return np.asarray(ts), np.asarray(fs)


def riccati_singularity_time(q0: float, K: float, threshold: float = 1e8) -> float:
    """First time the adaptive RK4 solution passes below -threshold."""
    f = q0
    t = 0.0
    while abs(f) < threshold:
        dt = min(1e-4 / max(1.0, math.sqrt(K)), 0.05 / abs(f))
        k1 = -0.25 * f * f + K
        f2 = f + 0.5 * dt * k1
        k2 = -0.25 * f2 * f2 + K
        f3 = f + 0.5 * dt * k2
        k3 = -0.25 * f3 * f3 + K
        f4 = f + dt * k3
        k4 = -0.25 * f4 * f4 + K
        f += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt
    return t


@dataclass(frozen=True)
class ValidationRecord:
    covered: bool
    window_ok: bool
    envelope_ok: object  # True/False, or None when the comparison is undefined
    slope_ok: bool
    verdict: str
    partial: bool
    t_final: float
    t_window: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def validate_prediction(cert: BlowupCertificate, result) -> ValidationRecord:
    """Compare a run against its certificate along the tracked characteristic.

    (a) did the run stop with "blowup_detected" inside 1.1 T1; (b) did q
    along the characteristic stay below the Riccati envelope plus
    0.05 |q0|; (c) did |u_x| along it stay at or above C0/2 until
    detection.  With failing flags the verdict is "not-covered-by-theorem"
    (the condition is sufficient only).
    """
    delta_T = 0.1
    t_window = (1.0 + delta_T) * cert.T1
    path = track_characteristic(result, cert.x0)
    covered = cert.cond_slope and cert.cond_product and cert.K_positive

    window_ok = bool(
        result.termination == "blowup_detected" and result.t_final <= t_window
    )

    envelope_ok = None
    sqrtK = math.sqrt(cert.K) if cert.K_positive else float("nan")
    if cert.K_positive and cert.q0 < -2.0 * sqrtK:
        tol_q = 0.05 * abs(cert.q0)
        mask = path.times < min(cert.T2, result.t_final + 1e-300)
        if np.any(mask):
            env = riccati_bound(path.times[mask], cert.q0, cert.K)
            envelope_ok = bool(np.all(path.q_along[mask] <= env + tol_q))
        else:
            envelope_ok = True

    t_stop = min(result.t_final, cert.T1)
    mask_c = path.times <= t_stop + 1e-300
    slope_ok = bool(np.all(np.abs(path.ux_along[mask_c]) >= 0.5 * cert.C0))

    if not covered:
        verdict = "not-covered-by-theorem"
    elif window_ok and (envelope_ok is not False) and slope_ok:
        verdict = "confirmed"
    else:
        verdict = "prediction-failed"
    return ValidationRecord(
        covered=covered,
        window_ok=window_ok,
        envelope_ok=envelope_ok,
        slope_ok=slope_ok,
        verdict=verdict,
        partial=path.truncated,
        t_final=result.t_final,
        t_window=t_window,
    )
