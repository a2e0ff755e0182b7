"""Closed-form exponents, transcendence-degree bounds and parameter choices.

When d and delta are powers of a common integer the ratio log d / log delta
is rational and every exponent is an exact mpq. Otherwise arb balls are used.
"""

from dataclasses import dataclass, field

import flint
import gmpy2
from flint import arb
from gmpy2 import mpq

from ..algebra.scalars import Q, qstr
from ..dynamics.balls import arb_json, arb_q
from ..errors import InconclusiveError, NotAdmissibleError, PreconditionError

PREC = 256


def _base_power(x):
    """(g, u) with x = g^u and u maximal."""
    x = int(x)
    for u in range(x.bit_length(), 0, -1):
        g, exact = gmpy2.iroot(x, u)
        if exact:
            return int(g), u
    return x, 1


def log_ratio(d, delta):
    """log d / log delta: an mpq when exact, else an arb."""
    d, delta = int(d), int(delta)
    if delta < 2 or d < 1:
        raise PreconditionError("need delta >= 2 and d >= 1")
    g, u = _base_power(delta)
    v, x = 0, d
    while x % g == 0 and x > 1:
        x //= g
        v += 1
    if x == 1:
        return mpq(v, u)
    with flint.ctx.workprec(PREC):
        return arb(d).log() / arb(delta).log()


def _is_exact(x):
    return not isinstance(x, arb)


def _lt(a, b):
    """a < b, decided exactly or by balls (InconclusiveError if a ball overlaps)."""
    if _is_exact(a) and _is_exact(b):
        return a < b
    with flint.ctx.workprec(PREC):
        a = a if isinstance(a, arb) else arb_q(a)
        b = b if isinstance(b, arb) else arb_q(b)
        if a < b:
            return True
        if a >= b:
            return False
    raise InconclusiveError("comparison not decided at working precision")


def _num(x):
    return x if isinstance(x, arb) else arb_q(x)


def num_str(x, digits=12):
    if _is_exact(x):
        return qstr(x)
    return x.str(digits, radius=False)


def num_json(x):
    if x is None:
        return None
    if _is_exact(x):
        return qstr(x)
    return arb_json(x, PREC)


def _floor(x):
    if _is_exact(x):
        return int(gmpy2.floor(x))
    with flint.ctx.workprec(PREC):
        lo = x.mid() - x.rad()
        hi = x.mid() + x.rad()
        a, b = int(lo.floor().unique_fmpz()), int(hi.floor().unique_fmpz())
    if a != b:
        raise InconclusiveError("integer part not decided at working precision")
    return a


@dataclass
class MeasureExponents:
    theorem: str
    n: int
    k: int
    d: int
    delta: int
    ratio: object
    admissible: bool
    theta_inner: object = None
    outer: object = None
    dW_exp: object = None
    eps: object = None
    notes: list = field(default_factory=list)

    @property
    def exact(self):
        return _is_exact(self.ratio)

    @property
    def U_formula(self):
        if not self.admissible:
            return "not admissible"
        return (
            f"C * (h(W) + d(W)^({num_str(self.theta_inner)}))^({num_str(self.outer)})"
            f" * d(W)^({num_str(self.dW_exp)})"
        )

    def U(self, h, dW, C=1):
        """C (h + dW^theta_inner)^outer dW^dW_exp as an arb."""
        with flint.ctx.workprec(PREC):
            h, dW = _num(Q(h)) if not isinstance(h, arb) else h, _num(Q(dW)) if not isinstance(dW, arb) else dW
            base = h + dW ** _num(self.theta_inner)
            return _num(Q(C)) * base ** _num(self.outer) * dW ** _num(self.dW_exp)

    def to_json(self):
        return {
            "theorem": self.theorem,
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "delta": self.delta,
            "log_ratio": num_json(self.ratio),
            "exact": self.exact,
            "admissible": self.admissible,
            "theta_inner": num_json(self.theta_inner),
            "outer": num_json(self.outer),
            "dW_exp": num_json(self.dW_exp),
            "eps": num_json(self.eps),
            "U_formula": self.U_formula,
            "notes": self.notes,
        }


def _check(n, k, d, delta):
    if n < 1 or k < 0 or delta < 2 or d < delta:
        raise PreconditionError("need n >= 1, k >= 0, delta >= 2, d >= delta")


def _eps(eps):
    e = Q(eps)
    if e < 0:
        raise PreconditionError("eps must be >= 0")
    return e


def _arith(r, f):
    if _is_exact(r):
        return f(r)
    with flint.ctx.workprec(PREC):
        return f(r)


def exponent_ia1(n, k, d, delta, eps=0):
    """Polynomial p, algebraic y: dimension condition k < n + 1 - r, r = log d / log delta."""
    _check(n, k, d, delta)
    eps = _eps(eps)
    r = log_ratio(d, delta)
    out = MeasureExponents("ia1", n, k, d, delta, r, False, eps=eps)
    if not _lt(k, _arith(r, lambda r: n + 1 - r)):
        out.notes.append("dimension condition fails")
        return out
    out.admissible = True
    out.outer = _arith(r, lambda r: mpq(n + 1, n - k) - mpq(k + 1, n - k) / r if _is_exact(r) else arb(n + 1) / (n - k) - arb(k + 1) / (n - k) / r)
    out.theta_inner = _arith(r, lambda r: (n + 1 - k + (eps if _is_exact(r) else arb_q(eps))) / (n + 1 - k - r))
    out.dW_exp = _arith(r, lambda r: mpq(k + 1, n - k) / r if _is_exact(r) else arb(k + 1) / (n - k) / r)
    if eps == 0:
        out.notes.append("eps = 0 gives the limiting exponent; the statement needs eps > 0")
    return out


def exponent_ia2(n, k, d, delta, eps=0):
    """Polynomial p, any y: dimension condition k < n + 1 - 2r."""
    _check(n, k, d, delta)
    eps = _eps(eps)
    r = log_ratio(d, delta)
    out = MeasureExponents("ia2", n, k, d, delta, r, False, eps=eps)
    if not _lt(k, _arith(r, lambda r: n + 1 - 2 * r)):
        out.notes.append("dimension condition fails")
        return out
    out.admissible = True
    ex = _is_exact(r)
    one = (lambda v: mpq(v)) if ex else (lambda v: arb(v))
    e_ = eps if ex else arb_q(eps)
    out.outer = _arith(r, lambda r: 2 * one(n + 1) / (n - k) - one(k + 1) / (n - k) / r)
    out.dW_exp = _arith(r, lambda r: one(k + 1) / (n - k) / r - one(n + 1) / (n - k))
    out.theta_inner = _arith(r, lambda r: (n + 1 - k - r + e_) / (n + 1 - k - 2 * r))
    if out.exact and out.dW_exp < 0:
        out.notes.append("negative degree exponent, taken at face value")
    if eps == 0:
        out.notes.append("eps = 0 gives the limiting exponent; the statement needs eps > 0")
    return out


def exponent_thm2(n, k, d, delta):
    """Rational p: dimension condition k < 2n + 1 - r (n + 1)."""
    _check(n, k, d, delta)
    r = log_ratio(d, delta)
    out = MeasureExponents("thm2", n, k, d, delta, r, False)
    if not _lt(k, _arith(r, lambda r: 2 * n + 1 - r * (n + 1))):
        out.notes.append("dimension condition fails")
        return out
    out.admissible = True
    one = (lambda v: mpq(v)) if out.exact else (lambda v: arb(v))
    out.theta_inner = _arith(r, lambda r: 1 / (1 - r * one(n + 1) / (2 * n - k + 1)))
    out.outer = _arith(r, lambda r: one(n + 1) / (n - k) - one(k + 1) / (n - k) / r)
    out.dW_exp = one(k + 1) / (n - k)
    return out


EXPONENTS = {"ia1": exponent_ia1, "ia2": exponent_ia2, "thm2": exponent_thm2}


@dataclass
class TrdegReport:
    n: int
    d: int
    delta: int
    ratio: object
    trdeg_f: int
    full_condition: bool
    trdeg_yf: int
    near_full_condition: bool
    thm2: object
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "n": self.n,
            "d": self.d,
            "delta": self.delta,
            "log_ratio": num_json(self.ratio),
            "trdeg_f_lower (poly p, algebraic y)": self.trdeg_f,
            "full independence condition (ratio < 2)": self.full_condition,
            "trdeg_yf_lower (poly p, any y)": self.trdeg_yf,
            "trdeg_yf >= n-1 condition (ratio < 3/2)": self.near_full_condition,
            "trdeg_f_lower (rational p)": num_json(self.thm2),
            "notes": self.notes,
        }


def trdeg_bounds(n, d, delta):
    if delta < 2 or d < delta:
        raise PreconditionError("need delta >= 2 and d >= delta")
    r = log_ratio(d, delta)
    c0 = n + 1 - _floor(r)
    c1 = _lt(r, 2)
    c2 = n + 1 - _floor(_arith(r, lambda r: 2 * r))
    c3 = _lt(r, mpq(3, 2))
    t2 = _arith(r, lambda r: 2 * n + 1 - r * (n + 1))
    notes = ["bounds from different statements are tabulated side by side, no ordering is asserted"]
    return TrdegReport(n, d, delta, r, c0, c1, c2, c3, t2, notes)


@dataclass
class VarietyStats:
    k: int
    degree: object
    height: object

    def __post_init__(self):
        self.degree = Q(self.degree)
        self.height = Q(self.height)
        if self.k < 0 or self.degree <= 0 or self.height <= 0:
            raise PreconditionError("need k >= 0 and positive degree and height")


@dataclass
class ParameterChoice:
    theorem: str
    theta: object
    D_prime: object
    T_real: object
    T: int
    condition_name: str
    condition_holds: bool
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "theorem": self.theorem,
            "theta": arb_json(self.theta, PREC),
            "D_prime": arb_json(self.D_prime, PREC),
            "T_real": arb_json(self.T_real, PREC),
            "T": self.T,
            "condition": self.condition_name,
            "condition_holds": self.condition_holds,
            "details": self.details,
        }


def _ceil(x):
    u = x.mid() + x.rad()
    return int(u.ceil().unique_fmpz())


def parameter_selection(theorem, stats: VarietyStats, n, d, delta, eps=0, c=None, c2=1, C=None, c3=mpq(1, 2), C3=1):
    """(theta(W), D', T) from the proof's parameter choices, plus the check they feed.

    For ia1/ia2 the check is the lower bound on T at D = D'; for thm2 it is
    delta^T >= C3 D^(n+1).
    """
    exps = EXPONENTS[theorem](n, stats.k, d, delta) if theorem == "thm2" else EXPONENTS[theorem](n, stats.k, d, delta, eps)
    if not exps.admissible:
        raise NotAdmissibleError(f"{theorem}: dimension {stats.k} not admissible for n={n}, d={d}, delta={delta}")
    k = stats.k
    with flint.ctx.workprec(PREC):
        cc = arb(1).exp() if c is None else _num(Q(c))
        r = _num(exps.ratio)
        ld, ldelta = arb(d).log(), arb(delta).log()
        h, dW = arb_q(stats.height), arb_q(stats.degree)
        cand = dW ** _num(exps.theta_inner)
        theta = h if h > cand else cand
        inv = 1 / r
        if theorem in ("ia1", "thm2"):
            Dp = cc * (theta ** (1 - inv) * dW**inv) ** (arb(1) / (n - k))
        else:
            Dp = cc * (theta ** (2 - inv) * dW ** (inv - 1)) ** (arb(1) / (n - k))
        lc = cc.log()
        llc = lc.log() if lc > 0 else arb(0)
        base = (theta / dW).log() / ld
        if theorem == "ia1":
            T_real = base + 2 * (lc + llc) / ldelta
        elif theorem == "ia2":
            T_real = base + (lc + llc) / ldelta
        else:
            T_real = base + ((n + 1) * lc + llc) / ldelta
        T = max(0, _ceil(T_real))
        details = {"c": arb_json(cc, PREC)}
        if theorem == "thm2":
            lhs = arb(delta) ** T
            rhs = _num(Q(C3)) * Dp ** (n + 1)
            ok = bool(lhs >= rhs)
            name = "delta^T >= C3 D^(n+1)"
            details.update({"lhs": arb_json(lhs, PREC), "rhs": arb_json(rhs, PREC), "C3": str(C3)})
        else:
            Cv = arb(1).exp() if C is None else _num(Q(C))
            if Cv < arb(1).exp():
                Cv = arb(1).exp()
            c3v = _num(Q(c3))
            need = (Dp.log() + Dp.log().log() + (19 * (n + 1) * _num(Q(c2))).log() + Cv.log().log() - abs(c3v.log()).log()) / ldelta
            ok = bool(arb(T) >= need)
            name = "T >= threshold at D = D'"
            details.update({"threshold": arb_json(need, PREC), "c2": str(c2), "C": arb_json(Cv, PREC), "c3": str(c3)})
    return ParameterChoice(theorem, theta, Dp, T_real, T, name, ok, details)
