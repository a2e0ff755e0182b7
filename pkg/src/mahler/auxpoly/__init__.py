from .construct import (
    AuxPolynomial,
    bound_flags,
    mutate,
    pushforward,
    pushforward_chain,
    siegel_polynomial,
    system_constants,
)
from .evaluation import Envelope, SeriesEvaluator, measure_envelope, tail_bound
from .verify import (
    DoubleBoundReport,
    IdentityReport,
    ScanResult,
    SystemSeries,
    double_bound_scan,
    exact_series_identity,
    log_rhs,
    threshold,
    verify_identity,
)
from .topfer import TopferReport, conjugate_norm_polynomial, topfer_polynomial
