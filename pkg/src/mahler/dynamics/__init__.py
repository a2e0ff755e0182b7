from .balls import ComplexBall, ball_json, to_acb, workprec
from .orbit import (
    NonDegeneracyReport,
    OrbitCertificate,
    check_nondegenerate,
    g_disc,
    iterate,
    orbit_bounds,
    orbit_data,
    reverify_mpmath,
)

__all__ = [
    "ComplexBall",
    "NonDegeneracyReport",
    "OrbitCertificate",
    "ball_json",
    "check_nondegenerate",
    "g_disc",
    "iterate",
    "orbit_bounds",
    "orbit_data",
    "reverify_mpmath",
    "to_acb",
    "workprec",
]
