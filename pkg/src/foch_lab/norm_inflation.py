"""Initial-data family exhibiting Besov norm inflation, and the ladder scan.

The family stacks lacunary spectral annuli on top of a fixed odd Gaussian
seed,

    u_0N^hat(xi) = (1/ln N) [ sum_{j=1..N} 2^{-3j} j^{-2/3} psi(2^{-j} xi)
                              + A g^hat(xi) ],      g(x) = x exp(-x^2),

with psi an even bump supported on 4/3 <= |xi| <= 3/2, so annulus j sits
inside the j-th dyadic shell.  The seed fixes the slope at the origin,
u_0N'(0) = A / ln N, while the stack fixes the curvature there; together
they make q(0) = u'(0) u''(0) as negative as the family allows at fixed
smallness.  The scan drives each family member through the solver and
records the certificate constants next to what the run actually did.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .blowup_analysis import build_certificate
from .integrator import StepperConfig, run
from .littlewood_paley import _bump, build_partition, sobolev_norm
from .spectral_core import (
    GridSpec,
    MultiplierSymbol,
    SpectralField,
    deriv_modes,
    helmholtz,
    point_eval,
)

__all__ = [
    "PSI_SUPPORT",
    "BumpProfile",
    "GaussianSeed",
    "InflationFamily",
    "ScanRow",
    "annulus_weight_sum",
    "build_psi",
    "build_g",
    "build_u0N",
    "curv0_prediction",
    "grid_for_level",
    "inflation_scan",
]

# support of the annulus profile in |xi|
PSI_SUPPORT = (4.0 / 3.0, 1.5)

_QUAD_NODES = 20001


def _psi_values(xi) -> np.ndarray:
    r = np.abs(np.asarray(xi, dtype=float))
    # map the support interval onto [-1, 1] for the reference bump
    return _bump(12.0 * r - 17.0)


@dataclass(frozen=True)
class BumpProfile:
    """Annulus profile with its quadrature moments on the support."""

    symbol: MultiplierSymbol
    l2: float
    moment2: float
    mass: float

    def __call__(self, xi) -> np.ndarray:
        return self.symbol(xi)


def _profile_moments() -> tuple:
    lo, hi = PSI_SUPPORT
    r = np.linspace(lo, hi, _QUAD_NODES)
    w = np.full(_QUAD_NODES, r[1] - r[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    v = _psi_values(r)
    # even profile: double the one-sided integrals
    l2 = math.sqrt(2.0 * float(np.sum(w * v * v)))
    moment2 = 2.0 * float(np.sum(w * r * r * v))
    mass = 2.0 * float(np.sum(w * v))
    return l2, moment2, mass


def build_psi(grid: GridSpec) -> BumpProfile:
    """Annulus profile, after checking the grid resolves the first shell."""
    lo, hi = PSI_SUPPORT
    in_first = np.count_nonzero(
        (np.abs(grid.xi) >= 2.0 * lo) & (np.abs(grid.xi) <= 2.0 * hi)
    )
    if in_first < 4:
        raise ValueError(
            f"grid spacing {2 * np.pi / grid.L:.4g} leaves only {in_first} "
            f"frequencies in the first annulus [{2 * lo:.4g}, {2 * hi:.4g}]; "
            "need at least 4 (enlarge L)"
        )
    l2, moment2, mass = _profile_moments()
    return BumpProfile(
        symbol=MultiplierSymbol(_psi_values, "annulus-bump"),
        l2=l2,
        moment2=moment2,
        mass=mass,
    )


@dataclass(frozen=True)
class GaussianSeed:
    """Odd seed A x exp(-x^2) scaled so the family H^2 size hits `target`."""

    field: SpectralField
    amplitude: float
    unit_h2: float
    target: float


def build_g(grid: GridSpec, target: float) -> GaussianSeed:
    """Seed scaled by A = target / (1 - target * c) with c = ||x e^{-x^2}||_{H^2}.

    The scaling solves A c / (A + ... ) bookkeeping so that data built on
    the seed alone would have H^2 norm `target`; target must stay below
    1/c or no positive amplitude exists.
    """
    if target <= 0.0:
        raise ValueError("target must be positive")
    # transform of x exp(-x^2); assembled in frequency space so the tail
    # underflows to exact zeros instead of an FFT noise floor
    unit_modes = -0.5j * math.sqrt(math.pi) * grid.xi * np.exp(-(grid.xi**2) / 4.0)
    unit_modes[grid.N_grid // 2] = 0.0
    unit = SpectralField.from_modes(grid, unit_modes)
    c = sobolev_norm(unit, 2.0)
    if target >= 1.0 / c:
        raise ValueError(
            f"target {target} is not reachable: needs target < 1/c = {1.0 / c:.6f}"
        )
    A = target / (1.0 - target * c)
    return GaussianSeed(
        field=SpectralField.from_modes(grid, A * unit.modes),
        amplitude=A,
        unit_h2=c,
        target=target,
    )


@dataclass(frozen=True)
class InflationFamily:
    """One member of the family with its measured size and origin data."""

    N: int
    u0: SpectralField
    seed: GaussianSeed
    h2_0: float
    h12_n0: float
    slope0: float
    curv0: float

    @property
    def product0(self) -> float:
        return self.slope0 * self.curv0


def build_u0N(N: int, profile: BumpProfile, seed: GaussianSeed) -> InflationFamily:
    """Family member with N annuli on the grid the seed was built on."""
    if N < 2:
        raise ValueError("need N >= 2 (ln N must be positive)")
    grid = seed.field.grid
    first_uncovered = None
    for j in range(1, N + 1):
        if PSI_SUPPORT[1] * 2.0**j > grid.nyquist:
            first_uncovered = j
            break
    if first_uncovered is not None:
        raise ValueError(
            f"annulus {first_uncovered} (|xi| up to "
            f"{PSI_SUPPORT[1] * 2.0**first_uncovered:.4g}) exceeds the Nyquist "
            f"frequency {grid.nyquist:.4g}; refine the grid"
        )
    stack = np.zeros(grid.N_grid)
    for j in range(1, N + 1):
        stack += 2.0 ** (-3 * j) * j ** (-2.0 / 3.0) * profile(grid.xi / 2.0**j)
    modes = (stack + seed.field.modes) / math.log(N)
    modes[grid.N_grid // 2] = 0.0
    u0 = SpectralField.from_modes(grid, modes)
    slope0 = point_eval(grid, deriv_modes(grid, u0.modes, 1), 0.0)
    curv0 = point_eval(grid, deriv_modes(grid, u0.modes, 2), 0.0)
    return InflationFamily(
        N=N,
        u0=u0,
        seed=seed,
        h2_0=sobolev_norm(u0, 2.0),
        h12_n0=sobolev_norm(helmholtz(u0, invert=False), 0.5),
        slope0=float(slope0),
        curv0=float(curv0),
    )


def annulus_weight_sum(N: int) -> float:
    """Partial sum of j^{-2/3} over the N annuli."""
    return float(np.sum(np.arange(1, N + 1, dtype=float) ** (-2.0 / 3.0)))


def curv0_prediction(N: int, profile: BumpProfile) -> float:
    """Quadrature value of u_0N''(0): each annulus contributes its second
    moment, the odd seed none."""
    return -profile.moment2 * annulus_weight_sum(N) / (2.0 * math.pi * math.log(N))


def grid_for_level(N: int, L: float = 200.0) -> int:
    """Smallest power-of-two grid (floor 2^13) with 5% headroom above the
    top annulus."""
    need = 1.05 * PSI_SUPPORT[1] * 2.0**N
    n = 2**13
    while math.pi * n / L < need:
        n *= 2
    return n


@dataclass(frozen=True)
class ScanRow:
    """Per-level scan record: family metrics, certificate, run outcome."""

    N: int
    grid_n: int
    h2_0: float
    h12_n0: float
    slope0: float
    curv0: float
    product0: float
    T1: float
    T2: float
    t_final: float
    termination: str
    max_b0inf: float
    error: str = ""


_NAN_ROW = dict(
    grid_n=0,
    h2_0=float("nan"),
    h12_n0=float("nan"),
    slope0=float("nan"),
    curv0=float("nan"),
    product0=float("nan"),
    T1=float("nan"),
    T2=float("nan"),
    t_final=float("nan"),
    termination="",
    max_b0inf=float("nan"),
)


def _scan_one(
    N: int,
    L: float,
    target: float,
    C1: float,
    C_wp: float,
    cfg: StepperConfig,
    grid_n,
) -> ScanRow:
    n = grid_n if grid_n is not None else grid_for_level(N, L)
    grid = GridSpec(L=L, N_grid=n)
    profile = build_psi(grid)
    seed = build_g(grid, target)
    fam = build_u0N(N, profile, seed)
    part = build_partition(grid)
    cert = build_certificate(fam.u0, x0=0.0, C1=C1, C_wp=C_wp, part=part)
    result = run(fam.u0, cfg)
    max_b0inf = max(row.b0inf_n for row in result.diagnostics)
    return ScanRow(
        N=N,
        grid_n=n,
        h2_0=fam.h2_0,
        h12_n0=fam.h12_n0,
        slope0=fam.slope0,
        curv0=fam.curv0,
        product0=fam.product0,
        T1=cert.T1,
        T2=cert.T2,
        t_final=result.t_final,
        termination=result.termination,
        max_b0inf=max_b0inf,
    )


def inflation_scan(
    Ns,
    L: float = 200.0,
    target: float = 0.3,
    C1: float = 0.25,
    C_wp: float = 1.0,
    t_end: float = 0.25,
    grid_n: int = None,
    cfl: float = 0.3,
    sample_stride: int = 50,
    max_workers: int = 1,
    boundary_abort: float = 1e-3,
) -> list:
    """Run the family ladder and collect one ScanRow per level.

    Levels run independently (threads when max_workers > 1; the FFT work
    releases the interpreter lock).  A level that raises is recorded as a
    row with its error string instead of aborting the scan.

    The annulus packets carry slowly decaying oscillatory tails (about
    3e-4 of the peak at the default box), so the box sentinel runs at a
    looser relative threshold than the solver default.
    """
    Ns = [int(N) for N in Ns]
    if not Ns:
        raise ValueError("empty level list")
    cfg = StepperConfig(
        t_end=t_end,
        formulation="u_form",
        cfl=cfl,
        sample_stride=sample_stride,
        snapshot_stride=0,
        boundary_abort=boundary_abort,
    )

    def task(N: int) -> ScanRow:
        try:
            return _scan_one(N, L, target, C1, C_wp, cfg, grid_n)
        except Exception as exc:  # recorded, not fatal: other levels continue
            return ScanRow(N=N, error=repr(exc), **_NAN_ROW)

    if max_workers <= 1 or len(Ns) == 1:
        return [task(N) for N in Ns]
    with ThreadPoolExecutor(max_workers=min(max_workers, len(Ns))) as pool:
        return list(pool.map(task, Ns))
