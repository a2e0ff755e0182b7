from .algebraic import AlgebraicNumber, FieldElement, NumberField
from .multipoly import MultiPoly, poly_length
from .poly import Poly, RationalFunction, chebyshev, chebyshev_recurrence, poly_compose, poly_gcd, poly_iterate
from .scalars import ONE, ZERO, Q, qstr
from .series import TruncatedSeries, power_table, rational_series, series_compose_inner

__all__ = [
    "AlgebraicNumber",
    "FieldElement",
    "MultiPoly",
    "NumberField",
    "ONE",
    "Poly",
    "Q",
    "RationalFunction",
    "TruncatedSeries",
    "ZERO",
    "chebyshev",
    "chebyshev_recurrence",
    "poly_compose",
    "poly_gcd",
    "poly_iterate",
    "poly_length",
    "power_table",
    "qstr",
    "rational_series",
    "series_compose_inner",
]
