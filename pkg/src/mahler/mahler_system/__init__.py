from .families import (
    cantor_residual,
    cantor_series,
    cantor_system,
    cantor_terms,
    chebyshev_commutation_table,
    chebyshev_tau_numeric,
    chebyshev_tau_series,
    chi_series,
    chi_system,
    iterate_series,
    m_series,
)
from .independence import ConditionReport, check_chi_independence
from .system import MahlerSystem, SeriesSolution, functional_residual, solve_series

__all__ = [
    "ConditionReport",
    "MahlerSystem",
    "SeriesSolution",
    "cantor_residual",
    "cantor_series",
    "cantor_system",
    "cantor_terms",
    "check_chi_independence",
    "chebyshev_commutation_table",
    "chebyshev_tau_numeric",
    "chebyshev_tau_series",
    "chi_series",
    "chi_system",
    "functional_residual",
    "iterate_series",
    "m_series",
    "solve_series",
]
