"""Independence conditions for chi sums: degree echelon of span{q_i}."""

from dataclasses import dataclass, field

from ..algebra.poly import Poly
from ..errors import PreconditionError
from ..linalg.exact import rank_exact


@dataclass
class ConditionReport:
    deg_p: int
    pivot_degrees: list
    dimension: int
    n: int
    linearly_independent: bool
    condition1: bool
    failing_degrees: list = field(default_factory=list)
    condition2: str = "not checked"
    notes: list = field(default_factory=list)

    @property
    def accepted(self):
        return self.linearly_independent and self.condition1

    def to_json(self):
        return {
            "deg_p": self.deg_p,
            "pivot_degrees": self.pivot_degrees,
            "dimension": self.dimension,
            "n": self.n,
            "linearly_independent": self.linearly_independent,
            "condition1": self.condition1,
            "failing_degrees": self.failing_degrees,
            "condition2": self.condition2,
            "accepted": self.accepted,
            "notes": self.notes,
        }


def degree_echelon(polys):
    """Basis of the Q-span with pairwise distinct degrees.

    The degrees of nonzero elements of the span are exactly the returned
    pivot degrees, whatever basis of the span was given.
    """
    basis = {}
    for q in polys:
        r = q
        while not r.is_zero() and r.degree in basis:
            b = basis[r.degree]
            r = r - b * (r.lc / b.lc)
        if not r.is_zero():
            basis[r.degree] = r
    return [basis[k] for k in sorted(basis)]


def check_chi_independence(p, qs, N=None):
    """Decide condition (1) exactly; optionally probe condition (2) to order N.

    Condition (1): the span of q_1..q_n has dimension n and no nonzero
    combination has degree 0 or a degree divisible by deg p.
    """
    p = p if isinstance(p, Poly) else Poly(p)
    qs = [q if isinstance(q, Poly) else Poly(q) for q in qs]
    if p[0] != 0:
        raise PreconditionError("p(0) must be 0")
    if p == Poly.x():
        raise PreconditionError("p must differ from z")
    for i, q in enumerate(qs):
        if q[0] != 0:
            raise PreconditionError(f"q_{i + 1}(0) must be 0")
    dp = p.degree
    ech = degree_echelon(qs)
    degs = [b.degree for b in ech]
    dim = len(ech)
    n = len(qs)
    independent = dim == n
    failing = [k for k in degs if k < 1 or k % dp == 0]
    cond1 = independent and not failing
    rep = ConditionReport(dp, degs, dim, n, independent, cond1, failing)
    if not independent:
        rep.notes.append(f"1, q_1..q_n are linearly dependent (span has dimension {dim} < {n})")
    if failing:
        rep.notes.append(f"pivot degrees divisible by deg p = {dp}: {failing}")
    if N is not None and independent:
        rep.condition2 = _condition2_probe(p, qs, N)
    return rep


def _condition2_probe(p, qs, N):
    """Heuristic: no combination of the chi_i is a polynomial of degree <= N/2 mod z^N."""
    from .families import chi_series

    chis = [chi_series(p, q, N) for q in qs]
    lo = N // 2 + 1
    rows = [[c[k] for k in range(lo, N)] for c in chis]
    if rank_exact(rows) == len(qs):
        return f"verified to order {N}"
    return f"failed at order {N}"
