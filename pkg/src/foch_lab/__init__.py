"""Spectral laboratory for a fifth-order shallow-water model.

Periodic pseudo-spectral discretization of a quasilinear fifth-order
equation with nonlocal smoothing, plus the analysis tooling around it:
dyadic frequency decompositions, conserved-quantity diagnostics, Riccati
wave-breaking certificates, and a lacunary initial-data family built to
inflate a critical Besov norm.
"""

__version__ = "0.1.0"

from .spectral_core import (
    GridSpec,
    MultiplierSymbol,
    SpectralField,
    apply_multiplier,
    derivative,
    helmholtz,
    kernel_convolution_oracle,
    kernel_value,
    p1_symbol,
    p_symbol,
)
from .littlewood_paley import (
    BesovIndex,
    DyadicPartition,
    besov_norm,
    build_partition,
    dyadic_block,
    low_cut,
    sobolev_norm,
)
from .foch_equation import formulation_residual, rhs_n, rhs_u
from .diagnostics import (
    ConservationReport,
    criterion_integrals,
    energy_E,
    energy_F,
    q_minimum,
    report,
    track_characteristic,
)
from .integrator import RunResult, StepperConfig, picard_solve, run, step
from .blowup_analysis import (
    BlowupCertificate,
    build_certificate,
    predict_T2,
    riccati_bound,
    validate_prediction,
)
from .norm_inflation import (
    InflationFamily,
    build_g,
    build_psi,
    build_u0N,
    inflation_scan,
)

__all__ = [
    "__version__",
    "GridSpec",
    "MultiplierSymbol",
    "SpectralField",
    "apply_multiplier",
    "derivative",
    "helmholtz",
    "kernel_convolution_oracle",
    "kernel_value",
    "p1_symbol",
    "p_symbol",
    "BesovIndex",
    "DyadicPartition",
    "besov_norm",
    "build_partition",
    "dyadic_block",
    "low_cut",
    "sobolev_norm",
    "formulation_residual",
    "rhs_n",
    "rhs_u",
    "ConservationReport",
    "criterion_integrals",
    "energy_E",
    "energy_F",
    "q_minimum",
    "report",
    "track_characteristic",
    "RunResult",
    "StepperConfig",
    "picard_solve",
    "run",
    "step",
    "BlowupCertificate",
    "build_certificate",
    "predict_T2",
    "riccati_bound",
    "validate_prediction",
    "InflationFamily",
    "build_g",
    "build_psi",
    "build_u0N",
    "inflation_scan",
]
