from .criterion import (
    CheckReport,
    CriterionParams,
    DirichletReport,
    criterion_check,
    criterion_params_from_selection,
    dirichlet_report,
)
from .exponents import (
    EXPONENTS,
    MeasureExponents,
    ParameterChoice,
    TrdegReport,
    VarietyStats,
    exponent_ia1,
    exponent_ia2,
    exponent_thm2,
    log_ratio,
    parameter_selection,
    trdeg_bounds,
)
from .probe import ProbeReport, lll_small_value_probe, m_at, resolve_point

__all__ = [
    "CheckReport",
    "CriterionParams",
    "DirichletReport",
    "EXPONENTS",
    "MeasureExponents",
    "ParameterChoice",
    "ProbeReport",
    "TrdegReport",
    "VarietyStats",
    "criterion_check",
    "criterion_params_from_selection",
    "dirichlet_report",
    "exponent_ia1",
    "exponent_ia2",
    "exponent_thm2",
    "lll_small_value_probe",
    "log_ratio",
    "m_at",
    "parameter_selection",
    "resolve_point",
    "trdeg_bounds",
]
