from .vanishing import (
    AdmissibilityReport,
    BoundReport,
    KFunctionProfile,
    SupportSet,
    VanishingResult,
    check_admissibility,
    check_multiplicity_bound,
    check_result_bound,
    grid_scan,
    max_vanishing_order,
    monomial_matrix,
    t_D,
    witness_order,
)
