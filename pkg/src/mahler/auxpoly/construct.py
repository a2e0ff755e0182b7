"""Siegel-step polynomials and their transport along the functional equation."""

from dataclasses import dataclass, field

from flint import arb
from gmpy2 import mpq

from ..algebra.multipoly import MultiPoly
from ..algebra.poly import Poly
from ..algebra.scalars import ONE, ZERO, qstr
from ..algebra.series import TruncatedSeries
from ..dynamics.balls import arb_json, arb_q
from ..errors import DegreeOverflowError, InfeasibleError, PreconditionError
from ..linalg.exact import integer_columns, left_kernel_exact
from ..linalg.lll import lll
from ..mahler_system.system import MahlerSystem
from ..multiplicity.vanishing import KFunctionProfile, SupportSet, monomial_matrix, t_D, witness_order


@dataclass
class AuxPolynomial:
    poly: MultiPoly
    D: int
    T: int = 0
    provenance: list = field(default_factory=list)

    @property
    def deg_z(self):
        return self.poly.deg_z()

    @property
    def deg_X(self):
        return self.poly.deg_X()

    @property
    def length(self):
        return self.poly.length()

    def log_length(self):
        return arb_q(self.length).log()

    def to_json(self, with_poly=True):
        out = {
            "D": self.D,
            "T": self.T,
            "deg_z": self.deg_z,
            "deg_X": self.deg_X,
            "length_bits": int(self.length).bit_length() if self.length >= 1 else 0,
            "log_length": arb_json(self.log_length()),
            "provenance": self.provenance,
        }
        if with_poly:
            out["poly"] = self.poly.to_json()
        return out


def _as_series(s):
    return s if isinstance(s, TruncatedSeries) else TruncatedSeries(s)


def siegel_polynomial(series, support: SupportSet, profile: KFunctionProfile = None, N=None):
    """Integer P supported on ``support`` with ord_0 P(series) >= t_D and small length.

    The integer kernel of the first t_D coefficient columns is LLL-reduced;
    the shortest (L1) reduced vector is kept, ties broken by higher order.
    The unreduced echelon basis is the fallback and both lengths are logged.
    """
    profile = profile or KFunctionProfile()
    series = [_as_series(s) for s in series]
    card = support.card
    t = t_D(profile, card)
    N = N or t + 32
    if N <= t:
        raise PreconditionError(f"truncation N = {N} must exceed t_D = {t}")
    rows = monomial_matrix(series, support, N)
    if t == 0:
        ker = [[1 if i == j else 0 for i in range(card)] for j in range(card)]
    else:
        ker = left_kernel_exact(integer_columns([r[:t] for r in rows]))
    if not ker:
        raise InfeasibleError(f"no nonzero combination vanishes to order t_D = {t} (invariant violation)")

    def l1(v):
        return sum(abs(int(x)) for x in v)

    def as_poly(v):
        return MultiPoly({e: c for e, c in zip(support.exponents, v) if c}, support.nvars)

    def order_of(v):
        o = witness_order(as_poly(v), series, N)
        return N if o is None else o

    echelon = min(ker, key=l1)
    method = "lll"
    cands = [v for v in lll(ker) if any(v)]
    best_len = min(l1(v) for v in cands)
    best = max((v for v in cands if l1(v) == best_len), key=order_of)
    if l1(echelon) < best_len:
        best, method = echelon, "echelon (shorter than reduced basis)"
    P = as_poly(best)
    if P.terms[max(P.terms)] < 0:
        P = -P
    ord_val = order_of(best)
    phi = profile.phi(support.abs_degree, t)
    length = P.length()
    bound_sq = 2 * card**2 * phi**2
    prov = {
        "step": "siegel",
        "method": method,
        "t_D": t,
        "card": card,
        "N": N,
        "kernel_dimension": len(ker),
        "order": ord_val,
        "order_at_least_N": ord_val >= N,
        "length": qstr(length),
        "echelon_length": l1(echelon),
        "length_bound_sq": str(bound_sq),
        "length_within_bound": bool(length * length <= bound_sq),
        "profile": profile.to_json(),
    }
    D = max(max(e) for e in support.exponents) + 1
    return AuxPolynomial(P, D, 0, [prov])


def _p_parts(sys):
    return sys.p.num, sys.p.den


def system_constants(sys: MahlerSystem, P0: AuxPolynomial):
    """A0, B0, and the a-priori constants c4, c6 and the per-step length factor."""
    A0, B0 = sys.A0_B0()
    n, D = sys.n, P0.D
    p1, p2 = _p_parts(sys)
    degA = max((x.degree for row in A0 for x in row if not x.is_zero()), default=0)
    degB = max((x.degree for x in B0 if not x.is_zero()), default=0)
    c4 = n * max(sys.q.degree, 0) + n * max(degA, degB, 0)
    c4 = max(c4, -(-P0.deg_z // D), 1)
    Lp = max(ONE, p1.length(), p2.length())
    rows = [sum((x.length() for x in A0[i]), ZERO) + B0[i].length() for i in range(n)]
    Lam = max([ONE, sys.q.length()] + rows)
    d = sys.d
    logL0 = arb_q(max(ONE, P0.length)).log()
    c6 = logL0 / D + arb(c4 * d) / (d - 1) ** 2 * arb_q(Lp).log() + n * arb_q(Lam).log()
    c6 = arb(c6.mid() + c6.rad())
    return {"A0": A0, "B0": B0, "c4": c4, "c6": c6, "L_p": Lp, "Lambda": Lam, "d": d, "n": n}


def _compose_cleared(c: Poly, p1: Poly, p2: Poly, K: int, cache):
    """p2^K c(p1/p2) as a polynomial (K >= deg c)."""
    if p2.degree == 0 and p2[0] == 1:
        return c(p1) if not c.is_zero() else c
    total = Poly()
    for j, cj in enumerate(c.coeffs):
        if cj:
            total = total + cache("p1", j) * cache("p2", K - j) * cj
    return total


def pushforward(P: AuxPolynomial, sys: MahlerSystem, consts=None) -> AuxPolynomial:
    """P_{T+1}(z, X) = q^{nD} p2^K P_T(p1/p2, (A0 X - B0)/q), K = deg_z P_T.

    Written monomial by monomial: c_alpha(p) q^{nD-|alpha|} prod_i (row_i(A0) X - B0_i)^{alpha_i}.
    """
    n, D = sys.n, P.D
    if P.poly.nvars != n + 1:
        raise PreconditionError("polynomial and system disagree on n")
    if P.deg_X >= n * D:
        raise PreconditionError(f"deg_X = {P.deg_X} >= nD = {n * D}")
    consts = consts or system_constants(sys, P)
    A0, B0 = consts["A0"], consts["B0"]
    p1, p2 = _p_parts(sys)
    nv = n + 1
    K = max(P.deg_z, 0)
    lin = []
    for i in range(n):
        L = MultiPoly.from_poly_z(-B0[i], nv)
        for j in range(n):
            if not A0[i][j].is_zero():
                L = L + MultiPoly.from_poly_z(A0[i][j], nv) * MultiPoly.var(j + 1, nv)
        lin.append(L)
    lin_pows = [{0: MultiPoly.const(1, nv)} for _ in range(n)]

    def lpow(i, a):
        c = lin_pows[i]
        if a not in c:
            c[a] = lpow(i, a - 1) * lin[i]
        return c[a]

    qpows = {0: Poly.const(1)}

    def qpow(k):
        if k not in qpows:
            qpows[k] = qpow(k - 1) * sys.q
        return qpows[k]

    pp = {"p1": [Poly.const(1)], "p2": [Poly.const(1)]}

    def pcache(which, k):
        lst = pp[which]
        base = p1 if which == "p1" else p2
        while len(lst) <= k:
            lst.append(lst[-1] * base)
        return lst[k]

    total = MultiPoly.zero(nv)
    for alpha, c in P.poly.group_X().items():
        zpart = _compose_cleared(c, p1, p2, K, pcache) * qpow(n * D - sum(alpha))
        term = MultiPoly.from_poly_z(zpart, nv)
        for i, a in enumerate(alpha):
            if a:
                term = term * lpow(i, a)
        total = total + term
    T1 = P.T + 1
    out = AuxPolynomial(total, D, T1, list(P.provenance))
    d = consts["d"]
    deg_budget = consts["c4"] * D * sum(d**k for k in range(T1 + 1))
    chain = P.length * consts["L_p"] ** K * consts["Lambda"] ** (n * D)
    log_len = out.log_length() if out.length >= 1 else arb(0)
    len_budget = consts["c6"] * D * arb(d) ** T1
    rec = {
        "step": "pushforward",
        "T": T1,
        "deg_z": out.deg_z,
        "deg_X": out.deg_X,
        "K_prev": K,
        "c4": consts["c4"],
        "deg_z_budget": deg_budget,
        "deg_z_within_budget": out.deg_z <= deg_budget,
        "deg_X_below_nD": out.deg_X < n * D,
        "length_step_chain_ok": bool(out.length <= chain),
        "c6": arb_json(consts["c6"]),
        "log_length_within_budget": bool(log_len < len_budget),
    }
    out.provenance.append(rec)
    if out.deg_z > deg_budget:
        raise DegreeOverflowError(f"deg_z = {out.deg_z} exceeds c4 envelope {deg_budget} at T = {T1}")
    return out


def pushforward_chain(P0: AuxPolynomial, sys: MahlerSystem, T_max: int):
    """[P_0, ..., P_{T_max}] with shared constants; provenance carries per-step checks."""
    consts = system_constants(sys, P0)
    out = [P0]
    for _ in range(T_max):
        out.append(pushforward(out[-1], sys, consts))
    return out, consts


def bound_flags(P: AuxPolynomial, consts):
    """Exact/ball checks of the degree and length envelopes for one P_{D,T}."""
    d, D, n, T = consts["d"], P.D, consts["n"], P.T
    deg_budget = consts["c4"] * D * sum(d**k for k in range(T + 1))
    log_len = P.log_length() if P.length >= 1 else arb(0)
    len_budget = consts["c6"] * D * arb(d) ** T
    return {
        "T": T,
        "deg_z": P.deg_z,
        "deg_z_budget": deg_budget,
        "deg_z_ok": P.deg_z <= deg_budget,
        "deg_z_ok_geometric": P.deg_z <= 2 * consts["c4"] * D * d ** (T + 1),
        "deg_X": P.deg_X,
        "deg_X_ok": P.deg_X < n * D,
        "log_length": arb_json(log_len),
        "log_length_budget": arb_json(len_budget),
        "length_ok": bool(log_len < len_budget),
    }


def mutate(P: AuxPolynomial, exponent=None, delta=1) -> AuxPolynomial:
    """Copy of P with one coefficient shifted by delta (default: the leading term)."""
    e = tuple(exponent) if exponent is not None else max(P.poly.terms)
    terms = dict(P.poly.terms)
    terms[e] = terms.get(e, ZERO) + mpq(delta)
    return AuxPolynomial(MultiPoly(terms, P.poly.nvars), P.D, P.T, P.provenance + [{"step": "mutate", "exponent": list(e)}])
