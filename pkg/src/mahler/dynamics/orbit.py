"""Rigorous orbits of a rational map p and the decay certificate |p^[T](y)| ~ c^(delta^T)."""

from dataclasses import dataclass, field

import flint
import gmpy2
from flint import acb, arb

from ..algebra.algebraic import AlgebraicNumber, FieldElement
from ..algebra.poly import Poly, RationalFunction
from ..algebra.scalars import ONE, ZERO, Q, bitsize
from ..errors import (
    DegenerateError,
    InconclusiveError,
    NoConvergenceError,
    PoleError,
    PrecisionExhausted,
)
from .balls import acb_q, arb_json, arb_q, ball_json, rel_radius_ok, to_acb

EXACT_BIT_BUDGET = 2**16


def _rf(p):
    if isinstance(p, RationalFunction):
        return p
    if isinstance(p, Poly):
        return RationalFunction.from_poly(p)
    return RationalFunction(Poly(p))


def _is_rational_point(y):
    if isinstance(y, AlgebraicNumber):
        return y.is_rational()
    if isinstance(y, (acb, arb, tuple, FieldElement)):
        return False
    try:
        Q(y)
        return True
    except TypeError:
        return False


def _rational_value(y):
    if isinstance(y, AlgebraicNumber):
        return y.as_rational()
    return Q(y)


def horner_acb(p: Poly, x):
    acc = acb(0)
    for c in reversed(p.coeffs):
        acc = acc * x + acb_q(c)
    return acc


def _exact_prefix(p, y, T_max, budget):
    """Exact rational orbit while values stay below the bit budget."""
    vals = [_rational_value(y)]
    while len(vals) <= T_max:
        w = vals[-1]
        if bitsize(w) > budget:
            break
        den = p.den(w)
        if den == 0:
            raise PoleError(f"p has a pole at iterate {len(vals) - 1}")
        vals.append(p.num(w) / den)
    return vals


def _ball_orbit(p, start, h0, T_max, wp):
    out = []
    with flint.ctx.workprec(wp):
        x = start() if callable(start) else start
        out.append(x)
        for h in range(h0, T_max):
            den = horner_acb(p.den, x)
            if den.contains(0):
                return out, h
            x = horner_acb(p.num, x) / den
            out.append(x)
    return out, None


def iterate(p, y, T_max, precision=256, exact_budget=EXACT_BIT_BUDGET):
    """Enclosures of p^[0](y), ..., p^[T_max](y).

    Rational y runs exactly until the bit budget is hit, then balls take
    over. Ball precision doubles until every relative radius is below
    2^(-precision/2), up to 16x the requested precision.
    """
    return orbit_data(p, y, T_max, precision, exact_budget)["balls"]


def orbit_data(p, y, T_max, precision=256, exact_budget=EXACT_BIT_BUDGET):
    p = _rf(p)
    exact = []
    if _is_rational_point(y):
        exact = _exact_prefix(p, y, T_max, exact_budget)
    target = precision // 2
    wp = precision + 32
    limit = 16 * precision
    while True:
        with flint.ctx.workprec(wp):
            balls = [acb_q(v) for v in exact]
            if len(balls) <= T_max:
                if exact:
                    start, h0 = balls.pop(), len(exact) - 1
                else:
                    start, h0 = to_acb(y), 0
                rest, pole_at = _ball_orbit(p, start, h0, T_max, wp)
                balls.extend(rest)
            else:
                pole_at = None
        if pole_at is None and all(rel_radius_ok(b, target) for b in balls):
            return {"balls": balls, "exact": exact, "working_precision": wp}
        if wp >= limit:
            if pole_at is not None:
                raise PoleError(f"denominator of p not separated from 0 at iterate {pole_at}")
            raise PrecisionExhausted(f"relative radius target 2^-{target} not met at {wp} bits")
        wp = min(2 * wp, limit)


@dataclass
class OrbitCertificate:
    orbit: list
    T_s: int
    c3_lower: object
    c3_upper: object
    g_disc_radius: object
    g_bounds: tuple
    delta: int
    T_max: int
    precision: int
    verified: list = field(default_factory=list)
    exact_orbit: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self):
        from ..algebra.scalars import qstr

        with flint.ctx.workprec(self.precision):
            return {
                "T_s": self.T_s,
                "T_max": self.T_max,
                "delta": self.delta,
                "precision": self.precision,
                "c3_lower": arb_json(self.c3_lower),
                "c3_upper": arb_json(self.c3_upper),
                "g_disc_radius": qstr(self.g_disc_radius),
                "g_bounds": [qstr(self.g_bounds[0]), qstr(self.g_bounds[1])],
                "verified_T": self.verified,
                "orbit": [ball_json(b) for b in self.orbit],
                "notes": self.notes,
            }


def _split_g(p):
    """p = z^delta * gnum / den with gnum(0) != 0."""
    delta = p.ord0()
    gnum = Poly(p.num.coeffs[delta:])
    return delta, gnum, p.den


def _disc_bounds(h: Poly, r):
    """(lower, upper) rational bounds of |h| on the closed disc |z| <= r."""
    c0 = abs(h[0])
    rest = ZERO
    rk = ONE
    for c in h.coeffs[1:]:
        rk *= r
        rest += abs(c) * rk
    return c0 - rest, c0 + rest


def g_disc(p, max_k=64):
    """Largest r = 2^-k with g = p/z^delta bounded away from 0 and infinity on |z| <= r
    and c''(g) r^(delta-1) < 1. Returns (r, lower, upper)."""
    delta, gnum, den = _split_g(p)
    for k in range(1, max_k + 1):
        r = gmpy2.mpq(1, 2**k)
        nl, nu = _disc_bounds(gnum, r)
        dl, du = _disc_bounds(den, r)
        if nl <= 0 or dl <= 0:
            continue
        lo, hi = nl / du, nu / dl
        if hi * r ** (delta - 1) < 1:
            return r, lo, hi
    raise NoConvergenceError("no disc of radius >= 2^-64 satisfies the shrink condition")


def _root(x, k):
    """x^(1/k) for a positive arb."""
    return arb(x) ** (arb(1) / k) if k != 1 else arb(x)


def orbit_bounds(p, y, T_max=32, precision=256, exact_budget=EXACT_BIT_BUDGET):
    """Certify c3_lower^(delta^T) <= |p^[T](y)| <= c3_upper^(delta^T) for T_s <= T <= T_max.

    With K = c''^(-1/(delta-1)) and rho = c''^(1/(delta-1)) |p^[T_s](y)| the
    iteration |p(w)| <= c'' |w|^delta gives |p^[T](y)| <= K rho^(delta^(T-T_s)),
    hence c3_upper = (max(1,K) rho)^(delta^-T_s); the lower constant is the
    same construction with c' and min(1,K'). Both are then widened by a
    relative slack 2^-(precision/4+8) so the inequalities are strict.
    """
    p = _rf(p)
    delta = p.ord0()
    if delta is None or delta < 2:
        raise NoConvergenceError("p must vanish to order >= 2 at 0")
    data = orbit_data(p, y, T_max, precision, exact_budget)
    balls = data["balls"]
    for h, b in enumerate(balls):
        if b.contains(0):
            raise DegenerateError(f"iterate {h} is not separated from 0")
    r, glo, ghi = g_disc(p)
    T_s = None
    for h, b in enumerate(balls):
        if b.abs_upper() <= arb_q(r):
            T_s = h
            break
    if T_s is None:
        raise NoConvergenceError(f"orbit does not enter the disc |z| <= {r} within {T_max} steps")
    wp = data["working_precision"]
    e = delta - 1
    notes = []
    with flint.ctx.workprec(wp):
        u = balls[T_s]
        if T_s < len(data["exact"]):
            u_abs = abs(acb_q(data["exact"][T_s]))
        else:
            u_abs = abs(u)
        ch = arb_q(ghi)
        cl = arb_q(glo)
        K = _root(1 / ch, e)
        rho = _root(ch, e) * u_abs
        Kl = _root(1 / cl, e)
        rhol = _root(cl, e) * u_abs
        # max(1, K) from above and min(1, K') from below
        K_up = arb(K.upper())
        Kl_lo = arb(Kl.lower())
        base_u = (K_up if K_up > 1 else arb(1)) * rho
        base_l = (Kl_lo if Kl_lo < 1 else arb(1)) * rhol
        expo = arb(1) / arb(delta) ** T_s
        c_up = base_u ** expo if T_s else base_u
        c_lo = base_l ** expo if T_s else base_l
        slack = arb(2) ** (-(precision // 4 + 8))
        c3_upper = arb((c_up * (1 + slack)).upper())
        c3_lower = arb((c_lo * (1 - slack)).lower())
        if not (c3_upper < 1 and c3_lower > 0):
            raise NoConvergenceError("decay constants could not be separated from 0 and 1")
        verified = []
        log_up = c3_upper.log()
        log_lo = c3_lower.log()
        for T in range(T_s, len(balls)):
            lu = abs(balls[T]).log()
            scale = arb(delta) ** T
            if lu <= log_up * scale and log_lo * scale <= lu:
                verified.append(T)
            else:
                raise PrecisionExhausted(f"decay inequality at T={T} not certified at {wp} bits")
        # monotonicity: the disc is mapped into itself
        if not ghi * r ** e < 1:
            notes.append("shrink condition failed")
    return OrbitCertificate(
        orbit=balls,
        T_s=T_s,
        c3_lower=c3_lower,
        c3_upper=c3_upper,
        g_disc_radius=r,
        g_bounds=(glo, ghi),
        delta=delta,
        T_max=T_max,
        precision=precision,
        verified=verified,
        exact_orbit=data["exact"],
        notes=notes,
    )


def reverify_mpmath(cert, p, y, precision=None):
    """Recheck the certificate's inequalities with mpmath interval arithmetic at 2x precision.

    Only rational (or Gaussian-rational) points are handled; this route
    shares no code with the flint balls.
    """
    from mpmath import iv

    from .balls import arb_mid_q, arb_rad_q

    p = _rf(p)
    prec = 2 * (precision or cert.precision)
    old = iv.prec
    iv.prec = prec
    try:
        if isinstance(y, tuple):
            x = iv.mpc(iv.mpf(str(Q(y[0]))), iv.mpf(str(Q(y[1]))))
        else:
            qy = _rational_value(y)
            x = iv.mpf(f"{int(qy.numerator)}/{int(qy.denominator)}") if qy.denominator != 1 else iv.mpf(int(qy.numerator))

        def ivq(c):
            return iv.mpf(f"{int(c.numerator)}/{int(c.denominator)}")

        def ev(poly, w):
            acc = iv.mpf(0)
            for c in reversed(poly.coeffs):
                acc = acc * w + ivq(c)
            return acc

        def arb_to_iv(a):
            m, r = arb_mid_q(a), arb_rad_q(a)
            lo, hi = m - r, m + r
            return iv.mpf([ivq(lo).a, ivq(hi).b])

        lo_c = arb_to_iv(cert.c3_lower)
        up_c = arb_to_iv(cert.c3_upper)
        ok = []
        for T in range(cert.T_max + 1):
            if T >= cert.T_s:
                mag = abs(x)
                lmag = iv.log(mag)
                sc = iv.mpf(cert.delta) ** T
                upper_ok = lmag.b <= (iv.log(up_c) * sc).a
                lower_ok = (iv.log(lo_c) * sc).b <= lmag.a
                ok.append(bool(upper_ok and lower_ok))
            x = ev(p.num, x) / ev(p.den, x)
        return all(ok), ok
    finally:
        iv.prec = old


@dataclass
class NonDegeneracyReport:
    ok: bool
    first_failure: object
    checked: int
    method: list
    notes: list = field(default_factory=list)

    def to_json(self):
        return {"ok": self.ok, "first_failure": self.first_failure, "checked": self.checked, "method": self.method, "notes": self.notes}


def _exact_orbit_field(p, y, T_max, budget):
    """Orbit in Q or Q(y), exactly, while the bit size stays within budget."""
    if _is_rational_point(y):
        vals = [_rational_value(y)]
    elif isinstance(y, AlgebraicNumber):
        vals = [y.generator()]
    else:
        return []
    while len(vals) <= T_max:
        w = vals[-1]
        size = bitsize(w) if not isinstance(w, FieldElement) else w.bitsize()
        if size > budget:
            break
        den = p.den(w)
        if (den == 0) if not isinstance(den, FieldElement) else den.is_zero():
            raise PoleError(f"p has a pole at iterate {len(vals) - 1}")
        vals.append(p.num(w) / den)
    return vals


def check_nondegenerate(p, y, sys, T_max=32, precision=256, exact_budget=EXACT_BIT_BUDGET):
    """Check that z * det A(z) * a(z) does not vanish at p^[h](y), h <= T_max.

    Exact arithmetic (in Q or Q(y)) decides while available; afterwards a
    ball excluding 0 decides. A ball containing 0 with no exact value is
    reported as inconclusive, never guessed.
    """
    p = _rf(p)
    test = Poly.x() * sys.q * sys.a
    exact = _exact_orbit_field(p, y, T_max, exact_budget)
    method = []
    for h, w in enumerate(exact):
        v = test(w)
        zero = v.is_zero() if isinstance(v, FieldElement) else v == 0
        method.append("exact")
        if zero:
            return NonDegeneracyReport(False, h, h + 1, method, [f"z q(z) a(z) vanishes at p^[{h}](y)"])
    if len(exact) > T_max:
        return NonDegeneracyReport(True, None, T_max + 1, method)
    balls = iterate(p, y, T_max, precision, exact_budget)
    with flint.ctx.workprec(precision + 32):
        for h in range(len(exact), T_max + 1):
            v = horner_acb(test, balls[h])
            method.append("ball")
            if v.contains(0):
                raise InconclusiveError(f"value at iterate {h} is a ball containing 0 and no exact value is available")
    return NonDegeneracyReport(True, None, T_max + 1, method)
