"""Support sets, K-function profiles and maximal vanishing orders."""

import itertools
import json
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpq

from ..algebra.multipoly import MultiPoly
from ..algebra.scalars import ONE, ZERO, Q, qstr
from ..algebra.series import TruncatedSeries, _mul_trunc
from ..errors import PreconditionError, SaturationError
from ..linalg.exact import integer_columns, left_kernel_exact, rank_exact
from ..linalg.modular import kernel_modular, rank_profile_mod


class SupportSet:
    """Finite set of exponent vectors (alpha_0 for z, then one per series)."""

    def __init__(self, exponents):
        exps = sorted({tuple(int(a) for a in e) for e in exponents})
        if not exps:
            raise PreconditionError("support set must be nonempty")
        k = len(exps[0])
        if any(len(e) != k or min(e) < 0 for e in exps):
            raise PreconditionError("exponent vectors must share a length and be nonnegative")
        self.exponents = exps
        self.nvars = k

    @classmethod
    def grid(cls, D, nvars):
        """{alpha : 0 <= alpha_i < D}."""
        return cls(itertools.product(range(D), repeat=nvars))

    @classmethod
    def parse(cls, spec, nvars):
        """``grid:D=k`` or a JSON list of exponent lists (inline or a file path)."""
        spec = spec.strip()
        if spec.startswith("grid:"):
            key, _, val = spec[5:].partition("=")
            if key.strip() != "D":
                raise PreconditionError(f"unknown support spec {spec!r}")
            return cls.grid(int(val), nvars)
        if spec.startswith("["):
            return cls(json.loads(spec))
        with open(spec) as fh:
            return cls(json.load(fh))

    @property
    def card(self):
        return len(self.exponents)

    @property
    def abs_degree(self):
        """|D| = max total degree."""
        return max(sum(e) for e in self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    def __len__(self):
        return len(self.exponents)

    def to_json(self):
        return [list(e) for e in self.exponents]


class KFunctionProfile:
    """psi (default constant c1) and phi(D, t) = (t+2)^(c2 |D|)."""

    def __init__(self, c1=1, c2=1, psi=None):
        self.c1 = c1
        self.c2 = Q(c2)
        self._psi = psi

    def psi(self, t):
        return self._psi(t) if self._psi is not None else self.c1

    def phi(self, abs_D, t):
        """(t+2)^(c2 |D|) as an exact rational when c2 |D| is an integer."""
        e = self.c2 * abs_D
        if e.denominator == 1:
            return mpq(t + 2) ** int(e)
        import mpmath

        return mpmath.mpf(t + 2) ** mpmath.mpf(f"{int(e.numerator)}/{int(e.denominator)}")

    def condition_holds(self, abs_D, t_range):
        """phi(D, t) >= 4 sqrt(2) (t+1) psi(t) on the range (squared to stay exact)."""
        out = []
        for t in t_range:
            ph = self.phi(abs_D, t)
            lhs = ph * ph
            rhs = 32 * (t + 1) ** 2 * self.psi(t) ** 2
            out.append(lhs >= rhs)
        return all(out)

    def monotone_on(self, t_range):
        vals = [self.psi(t) for t in t_range]
        return all(a <= b for a, b in zip(vals, vals[1:]))

    def to_json(self):
        return {"c1": self.c1, "c2": qstr(self.c2), "psi": "constant c1" if self._psi is None else "custom"}


def t_D(profile: KFunctionProfile, card: int) -> int:
    """Largest t with 2 t psi(t-1) <= card."""
    if card < 2 * profile.psi(0):
        raise PreconditionError(f"card = {card} < 2 psi(0) = {2 * profile.psi(0)}")
    t = 0
    while 2 * (t + 1) * profile.psi(t) <= card:
        t += 1
    return t


def _power_lists(series, exps, N):
    """cache[i][a] = coefficients of series[i]^a mod z^N."""
    maxdeg = [max(e[i] for e in exps) for i in range(len(series))]
    out = []
    for i, s in enumerate(series):
        base = s.coefficients(N) if not s.exact else s.truncate(N).coeffs
        pw = [[ONE] + [ZERO] * (N - 1)]
        for _ in range(maxdeg[i]):
            pw.append(_mul_trunc(pw[-1], base, N))
        out.append(pw)
    return out


def monomial_matrix(series, support: SupportSet, N: int):
    """Rows: Taylor coefficients (z^0..z^(N-1)) of prod_i series_i^alpha_i, alpha in support."""
    if len(series) != support.nvars:
        raise PreconditionError(f"support has {support.nvars} slots but {len(series)} series were given")
    for s in series:
        if not s.exact and s.order < N:
            raise PreconditionError(f"series known to order {s.order} < N = {N}")
    pw = _power_lists(series, support.exponents, N)
    rows = []
    for e in support:
        row = [ONE] + [ZERO] * (N - 1)
        for i, a in enumerate(e):
            if a:
                row = _mul_trunc(row, pw[i][a], N)
        rows.append(row)
    return rows


@dataclass
class VanishingResult:
    T0: int
    witness: MultiPoly
    rank_profile: list
    card: int
    N: int
    kernel_dimension: int
    routes_agree: bool
    method: str
    notes: list = field(default_factory=list)

    @property
    def deg_z(self):
        return self.witness.deg_z()

    @property
    def deg_X(self):
        return self.witness.deg_X()

    def to_json(self):
        return {
            "T0": self.T0,
            "card": self.card,
            "N": self.N,
            "witness": self.witness.to_json(),
            "deg_z": self.deg_z,
            "deg_X": self.deg_X,
            "rank_profile": self.rank_profile,
            "kernel_dimension": self.kernel_dimension,
            "routes_agree": self.routes_agree,
            "method": self.method,
            "notes": self.notes,
        }


def _cols(rows, t):
    return [r[:t] for r in rows]


def _left_kernel(rows_int, t, card):
    if t == 0:
        return [[1 if i == j else 0 for i in range(card)] for j in range(card)]
    return left_kernel_exact(_cols(rows_int, t))


def _left_kernel_modular(rows_int, t, card):
    if t == 0:
        return [[1 if i == j else 0 for i in range(card)] for j in range(card)]
    At = [[rows_int[i][j] for i in range(card)] for j in range(t)]
    return kernel_modular(At)[0]


def _witness_poly(vec, support, nvars):
    terms = {e: c for e, c in zip(support.exponents, vec) if c}
    return MultiPoly(terms, nvars)


def max_vanishing_order(series, support: SupportSet, N: int, check_routes=True) -> VanishingResult:
    """Maximal ord_0 of P(series) over nonzero P supported on ``support``.

    T0 + 1 is the first column count where the coefficient matrix reaches
    full row rank. A modular rank profile proposes it; exact elimination
    confirms (rank = card at T0 + 1, nonzero left kernel at T0).
    """
    series = [s if isinstance(s, TruncatedSeries) else TruncatedSeries(s) for s in series]
    card = support.card
    rows = monomial_matrix(series, support, N)
    rows_int = integer_columns(rows)
    method = "modular pre-pass + exact certification"
    profile = rank_profile_mod(rows_int)
    t_star = None
    if profile is not None and len(profile) >= card:
        cand = profile[card - 1] + 1
        if rank_exact(_cols(rows_int, cand)) == card:
            t_star = cand
    if t_star is None:
        method = "exact binary search"
        if rank_exact(rows_int) < card:
            ker = _left_kernel(rows_int, N, card)
            w = _witness_poly(ker[0], support, support.nvars)
            raise SaturationError(f"nonzero combination vanishes to order >= N = {N}", witness=w, order=N)
        lo, hi = 0, N  # rank(lo cols) < card, rank(hi cols) == card
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if rank_exact(_cols(rows_int, mid)) == card:
                hi = mid
            else:
                lo = mid
        t_star = hi
    T0 = t_star - 1
    ker = _left_kernel(rows_int, T0, card)
    if not ker:
        raise AssertionError("exact kernel empty at the certified order")
    agree = True
    notes = []
    if check_routes:
        ker2 = _left_kernel_modular(rows_int, T0, card)
        agree = sorted(map(tuple, ker)) == sorted(map(tuple, ker2))
        if not agree:
            notes.append("fraction-free and modular kernels differ")
    witness = _witness_poly(ker[0], support, support.nvars)
    pivots = profile if profile is not None else []
    return VanishingResult(T0, witness, pivots, card, N, len(ker), agree, method, notes)


def witness_order(witness: MultiPoly, series, N):
    """Exact ord_0 of witness(series) to order N (None if it vanishes mod z^N)."""
    terms = {}
    for e, c in witness.items():
        terms[e] = c
    val = _eval_all_slots(witness, series, N)
    return val.ord0()


def _eval_all_slots(P, series, N):
    pw = _power_lists(series, list(P.terms), N)
    out = [ZERO] * N
    for e, c in P.items():
        row = [ONE] + [ZERO] * (N - 1)
        for i, a in enumerate(e):
            if a:
                row = _mul_trunc(row, pw[i][a], N)
        for k in range(N):
            if row[k]:
                out[k] += c * row[k]
    return TruncatedSeries(out, N)


@dataclass
class BoundReport:
    T0: int
    deg_z: int
    deg_X: int
    n: int
    K1: object
    bound: object
    passes: bool
    min_K1: object

    def to_json(self):
        return {k: (qstr(v) if isinstance(v, type(ONE)) else v) for k, v in self.__dict__.items()}


def check_multiplicity_bound(T0, deg_z, deg_X, n, K1):
    """T0 <= K1 (deg_z + deg_X + 1)(deg_X + 1)^n, and the least K1 that passes."""
    K1 = Q(K1)
    shape = mpq((deg_z + deg_X + 1) * (deg_X + 1) ** n)
    bound = K1 * shape
    return BoundReport(T0, deg_z, deg_X, n, K1, bound, T0 <= bound, mpq(T0) / shape)


def check_result_bound(result: VanishingResult, n, K1, convention="x"):
    """convention "x": deg_X over the series slots only; "total": total degree (z slot included)."""
    if convention == "x":
        dx = result.deg_X
    elif convention == "total":
        dx = result.witness.total_degree()
    else:
        raise PreconditionError(f"unknown degree convention {convention!r}")
    return check_multiplicity_bound(result.T0, result.deg_z, dx, n, K1)


@dataclass
class AdmissibilityReport:
    T0: int
    card: int
    c: object
    admissible: bool
    ratio: object
    note: str = (
        "tested on the unrestricted maximum; a pass implies the length-restricted condition"
    )

    def to_json(self):
        return {
            "T0": self.T0,
            "card": self.card,
            "c": qstr(self.c),
            "admissible": self.admissible,
            "ratio": qstr(self.ratio),
            "note": self.note,
        }


def check_admissibility(series, support, c, profile=None, N=256):
    res = max_vanishing_order(series, support, N)
    c = Q(c)
    return AdmissibilityReport(res.T0, support.card, c, res.T0 <= c * support.card, mpq(res.T0, support.card))


def grid_scan(series, Ds, N, n=None):
    """T0, T0/card and the least K1 for canonical grids D in Ds."""
    rows = []
    for D in Ds:
        sup = SupportSet.grid(D, len(series))
        res = max_vanishing_order(series, sup, N)
        nn = len(series) - 1 if n is None else n
        br = check_result_bound(res, nn, 1)
        bt = check_result_bound(res, nn, 1, "total")
        rows.append(
            {
                "D": D,
                "card": sup.card,
                "T0": res.T0,
                "ratio": mpq(res.T0, sup.card),
                "deg_z": res.deg_z,
                "deg_X": res.deg_X,
                "min_K1": br.min_K1,
                "min_K1_total": bt.min_K1,
                "routes_agree": res.routes_agree,
            }
        )
    return rows


__all__ = ["gmpy2"]
