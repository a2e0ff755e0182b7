"""Checks of P_{D,T}(y, f(y)) = (prod_i q(p^[i](y)))^{nD} F(p^[T](y)) and the value double bound."""

from dataclasses import dataclass, field

import flint
from flint import acb, arb

from ..algebra.multipoly import MultiPoly
from ..algebra.poly import Poly
from ..algebra.scalars import ONE
from ..algebra.series import TruncatedSeries, series_compose_inner
from ..dynamics.balls import acb_q, arb_json, arb_q, ball_json
from ..dynamics.orbit import horner_acb, iterate, orbit_bounds
from ..errors import PreconditionError
from ..mahler_system.families import iterate_series
from ..mahler_system.system import MahlerSystem, solve_series
from ..multiplicity.vanishing import KFunctionProfile, SupportSet, max_vanishing_order
from .construct import AuxPolynomial, bound_flags, pushforward_chain, siegel_polynomial
from .evaluation import SeriesEvaluator


class SystemSeries:
    """Exact solution series of a system plus point evaluators for f and for F = P0(z, f)."""

    def __init__(self, sys: MahlerSystem, f0=None):
        self.sys = sys
        self.f0 = f0
        self._cache = {}
        self.f_eval = SeriesEvaluator(lambda N: [s.coefficients(N) for s in self.solve(N)], N0=128)
        self._F = {}

    def solve(self, N):
        best = [k for k in self._cache if k >= N]
        if best:
            return [s.truncate(N) for s in self._cache[min(best)]]
        sol = solve_series(self.sys, N, self.f0).f
        self._cache[N] = sol
        return sol

    def vector(self, N):
        """(z, f_1, ..., f_n) as series mod z^N."""
        return [TruncatedSeries.from_poly(Poly.x(), N)] + self.solve(N)

    def F_series(self, P0: MultiPoly, N):
        return P0.eval_series(self.solve(N), N)

    def F_evaluator(self, P0: MultiPoly):
        """(ord_0 F, evaluator of G = F / z^ord) for F = P0(z, f(z))."""
        key = P0
        if key not in self._F:
            N = 128
            while True:
                F = self.F_series(P0, N)
                o = F.ord0()
                if o is not None and o < N // 2:
                    break
                if N > 1 << 13:
                    raise PreconditionError("F vanishes to the computed order; P0 looks like a relation")
                N *= 2
            ordF = o
            ev = SeriesEvaluator(lambda M: [self.F_series(P0, M + ordF).coefficients(M + ordF)[ordF:]], N0=N)
            self._F[key] = (ordF, ev)
        return self._F[key]


def _step_degrees(P: AuxPolynomial):
    """K_j = deg_z P_{D,j} for j < T, read from the pushforward records."""
    K = {}
    for rec in P.provenance:
        if rec.get("step") == "pushforward":
            K[rec["T"] - 1] = rec["K_prev"]
    return [K[j] for j in range(P.T)]


def rhs_ball(P: AuxPolynomial, sys: MahlerSystem, orbit, P0: MultiPoly, ss: SystemSeries, bits):
    """(prod_i q(w_i)^{nD} p2(w_i)^{K_{T-1-i}}) * F(w_T) as a ball, w_i = p^[i](y)."""
    T, n, D = P.T, sys.n, P.D
    Ks = _step_degrees(P)
    p2 = sys.p.den
    prod = acb(1)
    for i in range(T):
        prod *= horner_acb(sys.q, orbit[i]) ** (n * D)
        if p2.degree > 0:
            prod *= horner_acb(p2, orbit[i]) ** Ks[T - 1 - i]
    ordF, ev = ss.F_evaluator(P0)
    w = orbit[T]
    G = ev(w, bits)[0]
    return prod * w**ordF * G, prod, ordF, G


def log_rhs(P: AuxPolynomial, sys: MahlerSystem, orbit, P0: MultiPoly, ss: SystemSeries, bits):
    """log |P_{D,T}(x)| through the product form, summed in logs (no underflow)."""
    T, n, D = P.T, sys.n, P.D
    Ks = _step_degrees(P)
    p2 = sys.p.den
    total = arb(0)
    for i in range(T):
        total += n * D * abs(horner_acb(sys.q, orbit[i])).log()
        if p2.degree > 0:
            total += Ks[T - 1 - i] * abs(horner_acb(p2, orbit[i])).log()
    ordF, ev = ss.F_evaluator(P0)
    w = orbit[T]
    G = ev(w, bits)[0]
    total += ordF * abs(w).log() + abs(G).log()
    return total


def _abs_poly(P: MultiPoly):
    return MultiPoly({e: abs(c) for e, c in P.items()}, P.nvars)


@dataclass
class IdentityReport:
    T: int
    lhs: object
    rhs: object
    diff: object
    scale: object
    contains_zero: bool
    radius_ok: bool
    exact_series: object = None
    precision: int = 256
    notes: list = field(default_factory=list)

    @property
    def holds(self):
        return self.contains_zero and self.radius_ok and self.exact_series is not False

    def to_json(self):
        return {
            "T": self.T,
            "lhs": ball_json(self.lhs),
            "rhs": ball_json(self.rhs),
            "diff": ball_json(self.diff),
            "scale": arb_json(self.scale),
            "contains_zero": self.contains_zero,
            "radius_ok": self.radius_ok,
            "exact_series": self.exact_series,
            "holds": self.holds,
            "precision": self.precision,
            "notes": self.notes,
        }


def exact_series_identity(P: AuxPolynomial, sys: MahlerSystem, P0: MultiPoly, ss: SystemSeries, N=64):
    """Both sides as exact series mod z^N: P_T(z, f(z)) and prod q(p^[i])^{nD} p2(p^[i])^K F(p^[T])."""
    T, n, D = P.T, sys.n, P.D
    f = ss.solve(N)
    lhs = P.poly.eval_series(f, N)
    its = iterate_series(sys.p, N)
    Ks = _step_degrees(P)
    F = P0.eval_series(f, N)
    qs = TruncatedSeries.from_poly(sys.q)
    p2s = TruncatedSeries.from_poly(sys.p.den)
    rhs = TruncatedSeries.from_poly(Poly.const(1), N)
    def at(s, i):
        # p^[i] = 0 mod z^N once i runs past the computed iterates
        if i >= len(its):
            return TruncatedSeries.from_poly(Poly.const(s[0]), N)
        return series_compose_inner(s, its[i], N)

    for i in range(T):
        rhs = rhs * at(qs, i) ** (n * D)
        if sys.p.den.degree > 0:
            rhs = rhs * at(p2s, i) ** Ks[T - 1 - i]
    Fp = at(F, T)
    return (lhs - rhs * Fp).is_zero_mod(N)


def verify_identity(P: AuxPolynomial, sys: MahlerSystem, y, P0, ss: SystemSeries = None, precision=256, exact_T_max=4, N_exact=64):
    """Ball check of the identity at y; exact series check as well for T <= exact_T_max."""
    P0 = P0.poly if isinstance(P0, AuxPolynomial) else P0
    ss = ss or SystemSeries(sys)
    T = P.T
    extra = int(P.length).bit_length() + 64
    wp = precision + extra
    orbit = iterate(sys.p, y, T, wp)
    with flint.ctx.workprec(wp):
        fy = ss.f_eval(orbit[0], wp)
        lhs = P.poly.evaluate(orbit[0], fy, coerce=acb_q)
        rhs, _, _, _ = rhs_ball(P, sys, orbit, P0, ss, wp)
        diff = lhs - rhs
        absvals = [abs(orbit[0])] + [abs(v) for v in fy]
        absvals = [arb(a.mid() + a.rad()) for a in absvals]
        scale = _abs_poly(P.poly).evaluate(absvals[0], absvals[1:], coerce=arb_q)
        scale = arb(scale.mid() + scale.rad())
        cz = bool(diff.contains(0))
        rad = arb(diff.real.rad()) + arb(diff.imag.rad())
        rad_ok = bool(rad < scale * arb(2) ** (-(precision // 2)))
    rep = IdentityReport(T, lhs, rhs, diff, scale, cz, rad_ok, precision=precision)
    if T <= exact_T_max:
        rep.exact_series = exact_series_identity(P, sys, P0, ss, N_exact)
    return rep


@dataclass
class DoubleBoundReport:
    T: int
    logvalue: object
    normalized: object
    bounds: dict
    above_threshold: bool
    negative: bool

    def to_json(self):
        return {
            "T": self.T,
            "logvalue": arb_json(self.logvalue),
            "normalized": arb_json(self.normalized),
            "above_threshold": self.above_threshold,
            "negative": self.negative,
            "bounds": self.bounds,
        }


@dataclass
class ScanResult:
    D: int
    rows: list
    c7_hat: object
    c8_hat: object
    threshold_T: int
    threshold_alt_T: object
    threshold_value: object
    C_measured: object
    C_used: object
    c3_upper: object
    siegel: dict
    constants: dict
    precision: int
    notes: list = field(default_factory=list)

    def band(self, T_lo=None):
        rows = [r for r in self.rows if T_lo is None or r.T >= T_lo]
        vals = [-r.normalized.mid() for r in rows]
        return min(vals), max(vals)

    def to_json(self):
        return {
            "D": self.D,
            "precision": self.precision,
            "threshold_T": self.threshold_T,
            "threshold_value": arb_json(self.threshold_value),
            "threshold_alt_T": self.threshold_alt_T,
            "C_measured": str(self.C_measured),
            "C_used": arb_json(self.C_used),
            "c3_upper": arb_json(self.c3_upper),
            "c7_hat": arb_json(self.c7_hat),
            "c8_hat": arb_json(self.c8_hat),
            "siegel": self.siegel,
            "constants": self.constants,
            "rows": [r.to_json() for r in self.rows],
            "notes": self.notes,
        }


def threshold(D, n, delta, c2, C, c3):
    """Right-hand side of the lower bound on T (real), with C clamped to C >= e."""
    C_used = arb(C) if isinstance(C, arb) else arb_q(C)
    e = arb(1).exp()
    if C_used < e:
        C_used = e
    val = (arb(D).log() + arb(D).log().log() + (19 * (n + 1) * arb_q(c2)).log() + C_used.log().log() - abs(c3.log()).log()) / arb(delta).log()
    return val, C_used


def _ceil_arb(x):
    u = x.mid() + x.rad()
    return int(u.ceil().unique_fmpz())


def double_bound_scan(D, sys: MahlerSystem, y, T_range, precision=384, f0=None, profile=None, C=None, ss=None):
    """log |P_{D,T}(x)| / (D^{n+1} delta^T) over T_range via the product form."""
    if D < 2:
        raise PreconditionError("D >= 2 is needed for log log D")
    profile = profile or KFunctionProfile()
    ss = ss or SystemSeries(sys, f0)
    n, delta = sys.n, sys.delta
    T_range = list(T_range)
    Tmax = max(T_range)
    sup = SupportSet.grid(D, n + 1)
    card = sup.card
    Nm = 4 * card + 64
    vec = ss.vector(Nm)
    P0 = siegel_polynomial(vec, sup, profile, Nm)
    if C is None:
        res = max_vanishing_order(vec, sup, Nm)
        C = ONE * res.T0 / card
    cert = orbit_bounds(sys.p, y, max(Tmax, 1), precision)
    with flint.ctx.workprec(precision):
        thr, C_used = threshold(D, n, delta, profile.c2, C, cert.c3_upper)
        thr_T = max(0, _ceil_arb(thr))
        alt = None
        try:
            y_ball = iterate(sys.p, y, 0, precision)[0]
            c3y = cert.c3_upper * abs(y_ball)
            thr2, _ = threshold(D, n, delta, profile.c2, C, c3y)
            alt = max(0, _ceil_arb(thr2))
        except Exception:
            alt = None
    chain, consts = pushforward_chain(P0, sys, Tmax)
    orbit = iterate(sys.p, y, Tmax, precision)
    rows = []
    with flint.ctx.workprec(precision):
        for T in T_range:
            P = chain[T]
            lv = log_rhs(P, sys, orbit, P0.poly, ss, precision)
            norm = lv / (arb(D) ** (n + 1) * arb(delta) ** T)
            rows.append(DoubleBoundReport(T, lv, norm, bound_flags(P, consts), T >= thr_T, bool(norm < 0)))
        negs = [-r.normalized for r in rows]
        c7 = max(negs, key=lambda a: a.mid())
        c8 = min(negs, key=lambda a: a.mid())
    kept = {k: v for k, v in consts.items() if k in ("c4", "d", "n")}
    kept["c6"] = arb_json(consts["c6"])
    kept["L_p"] = str(consts["L_p"])
    kept["Lambda"] = str(consts["Lambda"])
    notes = [
        "threshold uses log|log c3''|; the alternative reading with log|log(c3'' |y|)| is reported as threshold_alt_T",
        "C is clamped to at least e so that log log C is defined and nonnegative",
    ]
    return ScanResult(D, rows, c7, c8, thr_T, alt, thr, C, C_used, cert.c3_upper, P0.provenance[0], kept, precision, notes)
