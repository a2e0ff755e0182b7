"""The variety-restriction criterion and the Dirichlet-exponent remark."""

from dataclasses import dataclass, field

import flint
from flint import arb
from gmpy2 import mpq

from ..algebra.scalars import Q
from ..dynamics.balls import arb_json, arb_q
from ..errors import NotAdmissibleError, PreconditionError
from .exponents import PREC, ParameterChoice, VarietyStats, exponent_thm2, num_json, num_str


def _exact(x):
    return not isinstance(x, arb)


def _coerce(x):
    return x if isinstance(x, arb) else Q(x)


def _ball(x):
    return x if isinstance(x, arb) else arb_q(x)


def _fmt(x):
    return num_json(x)


def _le(a, b):
    """(decided, value) for a <= b; exact when both sides are rational."""
    if _exact(a) and _exact(b):
        return True, a <= b
    with flint.ctx.workprec(PREC):
        a, b = _ball(a), _ball(b)
        if a <= b:
            return True, True
        if a > b:
            return True, False
    return False, None


def _lt(a, b):
    if _exact(a) and _exact(b):
        return True, a < b
    with flint.ctx.workprec(PREC):
        a, b = _ball(a), _ball(b)
        if a < b:
            return True, True
        if a >= b:
            return True, False
    return False, None


def _log(x):
    with flint.ctx.workprec(PREC):
        return _ball(x).log()


@dataclass
class CriterionParams:
    lam: object
    sigma: object
    tau: object
    U: object
    deltas: list
    e: object = None

    def __post_init__(self):
        self.lam = _coerce(self.lam)
        self.sigma = _coerce(self.sigma)
        self.tau = _coerce(self.tau)
        self.U = _coerce(self.U)
        self.deltas = [_coerce(x) for x in self.deltas]
        ok, v = _le(1, self.lam)
        if ok and not v:
            raise PreconditionError("lambda must be >= 1")
        for a, b in zip(self.deltas, self.deltas[1:]):
            ok, v = _le(b, a)
            if ok and not v:
                raise PreconditionError("deltas must be non-increasing")
        if self.deltas:
            ok, v = _le(1, self.deltas[-1])
            if ok and not v:
                raise PreconditionError("deltas must be >= 1")

    def to_json(self):
        return {
            "lambda": _fmt(self.lam),
            "sigma": _fmt(self.sigma),
            "tau": _fmt(self.tau),
            "U": _fmt(self.U),
            "deltas": [_fmt(x) for x in self.deltas],
        }


@dataclass
class CheckReport:
    k: int
    m: int
    lhs: object
    rhs: object
    main_holds: object
    tau_floor: object
    tau_floor_holds: object
    U_gt_tau: object
    tau: object = None
    notes: list = field(default_factory=list)

    @property
    def passes(self):
        return self.main_holds is True and self.tau_floor_holds is True and self.U_gt_tau is True

    def to_json(self):
        return {
            "k": self.k,
            "m": self.m,
            "lhs": _fmt(self.lhs),
            "rhs": _fmt(self.rhs),
            "main_holds": self.main_holds,
            "tau_floor": _fmt(self.tau_floor),
            "tau": _fmt(self.tau),
            "tau_floor_holds": self.tau_floor_holds,
            "U_gt_tau": self.U_gt_tau,
            "passes": self.passes,
            "notes": self.notes,
        }


def _prod(xs):
    out = mpq(1)
    for x in xs:
        out = out * x
    return out


def criterion_check(params: CriterionParams, stats: VarietyStats, m, field_degree=1) -> CheckReport:
    """[K:Q] 3 lam^(k+1) d_1..d_k (d_(k+1) t(V) + tau deg V) <= U / (sigma m)^(k+1), and the tau floor."""
    k = stats.k
    if len(params.deltas) != m:
        raise PreconditionError(f"expected {m} deltas, got {len(params.deltas)}")
    if k + 1 > m:
        raise PreconditionError("need k + 1 <= m")
    dl = params.deltas
    lam, tau, U, sigma = params.lam, params.tau, params.U, params.sigma
    tV, degV = stats.height, stats.degree
    exact = all(_exact(x) for x in [lam, tau, U, sigma] + dl)
    notes = []
    if exact:
        lhs = field_degree * 3 * lam ** (k + 1) * _prod(dl[:k]) * (dl[k] * tV + tau * degV)
        rhs = U / (sigma * m) ** (k + 1)
    else:
        with flint.ctx.workprec(PREC):
            b = [_ball(x) for x in dl]
            pr = arb(1)
            for x in b[:k]:
                pr *= x
            lhs = field_degree * 3 * _ball(lam) ** (k + 1) * pr * (b[k] * arb_q(tV) + _ball(tau) * arb_q(degV))
            rhs = _ball(U) / (_ball(sigma) * m) ** (k + 1)
    ok, main = _le(lhs, rhs)
    if not ok:
        notes.append("main inequality not decided at working precision")
    with flint.ctx.workprec(PREC):
        pr = arb(1)
        for x in dl:
            pr *= _ball(x)
        floor = 4 * (k + 1) * (pr * (1 + m * m)).log()
    ok1, fl = _le(floor, tau)
    ok2, ut = _lt(tau, U)
    if not ok1 or not ok2:
        notes.append("tau conditions not decided at working precision")
    return CheckReport(k, m, lhs, rhs, main, floor, fl, ut, tau, notes)


def criterion_params_from_selection(choice: ParameterChoice, n, d, delta, c6, c7, c8):
    """lam = 2, m = n, all deltas D', tau = c6 D' d^T, U = c8 D'^(n+1) delta^T / 2.

    sigma is 4 c7 / c8 on the polynomial paths; on the rational path pass (C5, C6)
    as (c7, c8) and sigma is C5 / C6.
    """
    with flint.ctx.workprec(PREC):
        Dp = choice.D_prime
        c6, c7, c8 = _ball(_coerce(c6)), _ball(_coerce(c7)), _ball(_coerce(c8))
        factor = 4 if choice.theorem in ("ia1", "ia2") else 1
        sigma = factor * c7 / c8
        tau = c6 * Dp * arb(d) ** choice.T
        U = c8 * Dp ** (n + 1) * arb(delta) ** choice.T / 2
        lam = arb(2)
    return CriterionParams(lam, sigma, tau, U, [Dp] * n)


@dataclass
class DirichletReport:
    n: int
    d: int
    delta: int
    clean_regime: bool
    admissible: bool
    theta_inner: object = None
    outer: object = None
    dW_exp: object = None
    U_formula: str = ""
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "n": self.n,
            "d": self.d,
            "delta": self.delta,
            "clean_regime (d = delta)": self.clean_regime,
            "admissible": self.admissible,
            "theta_inner": num_json(self.theta_inner),
            "outer": num_json(self.outer),
            "dW_exp": num_json(self.dW_exp),
            "U_formula": self.U_formula,
            "notes": self.notes,
        }


def dirichlet_report(n, d, delta, strict=False):
    """Hypersurface (k = n - 1) form of the rational-p measure: U = C (h + d^th)^outer d^dW."""
    e = exponent_thm2(n, n - 1, d, delta)
    out = DirichletReport(n, d, delta, d == delta, e.admissible, notes=list(e.notes))
    if not e.admissible:
        if strict:
            raise NotAdmissibleError(f"k = n - 1 = {n - 1} fails the dimension condition")
        return out
    out.theta_inner, out.outer, out.dW_exp = e.theta_inner, e.outer, e.dW_exp
    out.U_formula = f"C * (h + d^({num_str(e.theta_inner)}))^({num_str(e.outer)}) * d^({num_str(e.dW_exp)})"
    if d == delta and e.theta_inner == n + 2:
        out.notes.append(f"theta_inner = n + 2 = {n + 2}")
    return out
