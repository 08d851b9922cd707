"""Adaptive RK4 time stepping for either formulation, with blow-up,
resolution and finiteness sentinels, plus the successive-approximation
scheme that mirrors the local well-posedness construction.

The CFL bound follows the transport speed u^2 + u_x^2; the nonlocal flux
terms are smoothing and do not tighten it.  Blow-up is detected through
the functional q = u_x u_xx rather than norm growth alone.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import ConservationReport, report
from .foch_equation import (
    NonFiniteFieldError,
    _field,
    _fine,
    _half,
    _ws,
    rhs_n_half,
    rhs_u_half,
)
from .littlewood_paley import (
    BesovIndex,
    _chi_profile,
    besov_norm,
    build_partition,
)
from .spectral_core import (
    GridSpec,
    SpectralField,
    boundary_amplitude,
    tail_mass_fraction,
)

__all__ = ["StepperConfig", "RunResult", "PicardResult", "step", "run", "picard_solve"]

#: spectral-tail fraction of L2 mass above which a run is stopped
TAIL_LIMIT = 0.01


@dataclass(frozen=True)
class StepperConfig:
    t_end: float
    formulation: str = "u_form"
    dt_init: float = 0.1
    cfl: float = 0.3
    dt_min: float = 1e-12
    q_abort: float = 1e6
    boundary_abort: float = 1e-6
    sample_stride: int = 1
    # extension: how many sample events apart full fields are stored
    # (0 keeps only the first and last snapshot)
    snapshot_stride: int = 1

    def __post_init__(self):
        if min(self.t_end, self.dt_init, self.cfl, self.dt_min,
               self.q_abort, self.boundary_abort) <= 0:
            raise ValueError("stepper parameters must be positive")
        if self.dt_min >= self.dt_init:
            raise ValueError("dt_min must be smaller than dt_init")
        if self.sample_stride < 1 or self.snapshot_stride < 0:
            raise ValueError("invalid stride")
        if self.formulation not in ("u_form", "n_form"):
            raise ValueError(f"unknown formulation {self.formulation!r}")


@dataclass
class RunResult:
    times: list
    snapshots: list
    snapshot_times: list
    diagnostics: list
    termination: str
    t_final: float
    dt_log: list = field(default_factory=list)
    extras: list = field(default_factory=list)
    detail: str = ""


def _rhs_for(cfg: StepperConfig):
    return rhs_u_half if cfg.formulation == "u_form" else rhs_n_half


def _rk4(grid: GridSpec, yh: np.ndarray, dt: float, rhs) -> np.ndarray:
    k1 = rhs(grid, yh)
    k2 = rhs(grid, yh + (0.5 * dt) * k1)
    k3 = rhs(grid, yh + (0.5 * dt) * k2)
    k4 = rhs(grid, yh + dt * k3)
    return yh + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step(state: SpectralField, dt: float, cfg: StepperConfig) -> SpectralField:
    """One RK4 step of the configured formulation (public, field-level)."""
    grid = state.grid
    yh = _half(state)
    yh[grid.N_grid // 2] = 0.0
    return _field(grid, _rk4(grid, yh, dt, _rhs_for(cfg)))


def _speed_max(grid: GridSpec, uh: np.ndarray) -> float:
    w = _ws(grid)
    uf = _fine(grid, uh)
    uxf = _fine(grid, 1j * w["xi"] * uh)
    return float(np.max(uf * uf + uxf * uxf))


def run(u0: SpectralField, cfg: StepperConfig, observers=()) -> RunResult:
    """Integrate from u0 until t_end or a termination trigger.

    Sentinels are evaluated at sample events: q_min below -q_abort stops
    with "blowup_detected"; a hot spectral tail (top 10% of frequencies
    holding more than 1% of the L2 mass) or boundary activity stops with
    "resolution_loss"; non-finite values stop with "nonfinite".
    """
    grid = u0.grid
    # boundary_amplitude is already relative to the field maximum
    if boundary_amplitude(u0) > cfg.boundary_abort:
        raise ValueError("initial data does not decay at the box boundary")
    part = build_partition(grid)
    w = _ws(grid)
    one = 1.0 + w["xi"] ** 2
    rhs = _rhs_for(cfg)

    yh = _half(u0)
    yh[grid.N_grid // 2] = 0.0
    if cfg.formulation == "n_form":
        yh = one * yh

    def u_field_of(state):
        uh = state if cfg.formulation == "u_form" else state / one
        return _field(grid, uh), uh

    t = 0.0
    u_f, uh = u_field_of(yh)
    times = [0.0]
    diags = [report(u_f, part)]
    snaps = [u_f]
    snap_times = [0.0]
    extras = [{k: fn(0.0, u_f) for k, fn in dict(observers).items()}] if observers else []
    dt_log = []
    termination = "completed"
    detail = ""
    eps = 1e-12 * max(1.0, cfg.t_end)
    step_idx = 0
    sample_idx = 0

    while t < cfg.t_end - eps:
        bound = cfg.cfl * grid.dx / max(1.0, _speed_max(grid, uh))
        dt = min(cfg.dt_init, bound, cfg.t_end - t)
        if dt < cfg.dt_min and cfg.t_end - t > cfg.dt_min:
            termination = "resolution_loss"
            detail = f"time step collapsed below dt_min ({bound:.3e})"
            break
        try:
            yh = _rk4(grid, yh, dt, rhs)
        except NonFiniteFieldError as err:
            termination = "nonfinite"
            detail = str(err)
            break
        if not np.all(np.isfinite(yh)):
            termination = "nonfinite"
            break
        t += dt
        step_idx += 1
        dt_log.append((dt, bound))
        final = t >= cfg.t_end - eps
        if step_idx % cfg.sample_stride != 0 and not final:
            uh = yh if cfg.formulation == "u_form" else yh / one
            continue
        u_f, uh = u_field_of(yh)
        sample_idx += 1
        rep = report(u_f, part)
        times.append(t)
        diags.append(rep)
        if observers:
            extras.append({k: fn(t, u_f) for k, fn in dict(observers).items()})
        want_snap = cfg.snapshot_stride > 0 and sample_idx % cfg.snapshot_stride == 0
        if want_snap or final:
            snaps.append(u_f)
            snap_times.append(t)
        if rep.q_min < -cfg.q_abort:
            termination = "blowup_detected"
            break
        if tail_mass_fraction(u_f) > TAIL_LIMIT:
            termination = "resolution_loss"
            detail = "spectral tail exceeded 1% of L2 mass"
            break
        if boundary_amplitude(u_f) > cfg.boundary_abort:
            termination = "resolution_loss"
            detail = "field reached the box boundary"
            break

    if snap_times[-1] != t and termination != "nonfinite":
        u_f, uh = u_field_of(yh)
        snaps.append(u_f)
        snap_times.append(t)
        if times[-1] != t:
            times.append(t)
            diags.append(report(u_f, part))
            if observers:
                extras.append({k: fn(t, u_f) for k, fn in dict(observers).items()})

    return RunResult(
        times=times,
        snapshots=snaps,
        snapshot_times=snap_times,
        diagnostics=diags,
        termination=termination,
        t_final=t,
        dt_log=dt_log,
        extras=extras,
        detail=detail,
    )


@dataclass
class PicardResult:
    iterates: list
    rhos: list
    diverged: bool


def _lagrange_mid(traj, m):
    """Cubic interpolation of a stored trajectory at the midpoint of
    [m, m+1]; equally spaced nodes."""
    M = len(traj) - 1
    if M < 3:
        return 0.5 * (traj[m] + traj[m + 1])
    if m == 0:
        c, base = (0.3125, 0.9375, -0.3125, 0.0625), 0
    elif m == M - 1:
        c, base = (0.0625, -0.3125, 0.9375, 0.3125), M - 3
    else:
        c, base = (-0.0625, 0.5625, 0.5625, -0.0625), m - 1
    return (
        c[0] * traj[base]
        + c[1] * traj[base + 1]
        + c[2] * traj[base + 2]
        + c[3] * traj[base + 3]
    )


def picard_solve(
    u0: SpectralField,
    T: float,
    k_max: int,
    steps: int = 64,
    s: float = 2.0,
) -> PicardResult:
    """Successive linear-transport approximations to the n-form solution.

    Iterate k+1 solves n_t + ((u^k)^2 + (u^k_x)^2) n_x = G(u^k) by RK4 with
    the coefficient trajectory frozen from iterate k, starting from the
    low-frequency cut S_{k+1} n_0.  Residuals are Besov norms of successive
    differences at time T with index (s-1, 2, 2).
    """
    if k_max > 30:
        raise ValueError("k_max must stay at 30 or below")
    from .foch_equation import _mono, _u_monomials, _flux_g_modes, _smooth_combine

    grid = u0.grid
    part = build_partition(grid)
    w = _ws(grid)
    ixi = 1j * w["xi"]
    one = 1.0 + w["xi"] ** 2
    nh0 = one * _half(u0)
    nh0[grid.N_grid // 2] = 0.0
    h = T / steps
    zero = np.zeros_like(nh0)
    traj = [zero] * (steps + 1)

    def g_and_fines(uh_c):
        mono = _u_monomials(grid, uh_c)
        g1, g2, g3 = _flux_g_modes(mono)
        gmod = _smooth_combine(grid, w["p1"], g1, g2, g3)
        uf, uxf, _ = mono["_fines"]
        return gmod, uf, uxf

    rhos = []
    iterates = []
    prev_end = zero
    for k in range(k_max):
        cut = _chi_profile(np.abs(w["xi"]) / 2.0 ** (k + 1))
        nh = cut * nh0
        node_data = [g_and_fines(traj[m]) for m in range(steps + 1)]
        mid_data = [g_and_fines(_lagrange_mid(traj, m)) for m in range(steps)]
        new_traj = [w["p1"] * nh]
        for m in range(steps):
            def rhs_at(data, nh_s):
                gmod, uf, uxf = data
                nxf = _fine(grid, ixi * nh_s)
                adv = _mono(grid, uf, uf, nxf) + _mono(grid, uxf, uxf, nxf)
                return -adv + gmod
            k1 = rhs_at(node_data[m], nh)
            k2 = rhs_at(mid_data[m], nh + (0.5 * h) * k1)
            k3 = rhs_at(mid_data[m], nh + (0.5 * h) * k2)
            k4 = rhs_at(node_data[m + 1], nh + h * k3)
            nh = nh + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            new_traj.append(w["p1"] * nh)
        diff = _field(grid, nh - prev_end)
        rhos.append(besov_norm(diff, BesovIndex(s - 1.0, 2.0, 2.0), part))
        iterates.append(_field(grid, nh))
        prev_end = nh
        traj = new_traj
        if not math.isfinite(rhos[-1]):
            break
    diverged = not all(math.isfinite(r) for r in rhos) or (
        len(rhos) >= 4
        and all(rhos[i] > rhos[i - 1] for i in range(len(rhos) - 3, len(rhos)))
    )
    return PicardResult(iterates=iterates, rhos=rhos, diverged=diverged)
