"""Generators for the explicit families: chi sums, Cantor series, Chebyshev tau."""

import flint

from ..algebra.poly import Poly, RationalFunction, chebyshev
from ..algebra.scalars import ONE
from ..algebra.series import TruncatedSeries, rational_series, series_compose_inner
from ..errors import MahlerError, NoConvergenceError, PreconditionError, RejectedError
from .system import MahlerSystem


def _as_rf(p):
    if isinstance(p, RationalFunction):
        return p
    if isinstance(p, Poly):
        return RationalFunction.from_poly(p)
    return RationalFunction(Poly(p))


def _delta(p):
    if p.den[0] == 0:
        raise PreconditionError("p must be regular at 0")
    o = p.ord0()
    if o is None or o < 2:
        raise PreconditionError(f"ord_0 p must be at least 2 (got {o})")
    return o


def iterate_series(p, N):
    """[p^[0], p^[1], ...] as series mod z^N, stopping once the iterate is 0 mod z^N."""
    p = _as_rf(p)
    cur = TruncatedSeries.from_poly(Poly.x(), N)
    out = [cur]
    ps = rational_series(p, N)
    while True:
        o = cur.ord0()
        if o is None:
            out.pop()
            break
        nxt = series_compose_inner(ps, cur, N)
        out.append(nxt)
        cur = nxt
    return out


def chi_series(p, q, N):
    """chi(z) = sum_h q(p^[h](z)) mod z^N; solves chi(z) = chi(p(z)) + q(z)."""
    p = _as_rf(p)
    q = q if isinstance(q, Poly) else Poly(q)
    if q[0] != 0:
        raise PreconditionError("q(0) must be 0")
    _delta(p)
    qs = TruncatedSeries.from_poly(q)
    total = TruncatedSeries.zero(N)
    for it in iterate_series(p, N):
        total = total + series_compose_inner(qs, it, N)
    return total


def chi_system(p, q):
    """The 1x1 system with a = 1, A = (1), B = (q)."""
    return MahlerSystem(Poly.const(1), [[Poly.const(1)]], [q if isinstance(q, Poly) else Poly(q)], _as_rf(p))


def cantor_terms(delta, N):
    """Number of factors q(p^[i]) the closed form uses: ceil(log_delta N) + 1."""
    H = 0
    while delta**H < N:
        H += 1
    return H + 1


def cantor_series(p, q, N, return_terms=False):
    """theta(z) = sum_h 1 / (q(z) q(p(z)) ... q(p^[h](z))) mod z^N.

    Once delta^H >= N every further factor is q(0) mod z^N, so the tail is
    the geometric series (1 / prod_{i<H} q(p^[i])) / (q(0) - 1).
    """
    p = _as_rf(p)
    q = q if isinstance(q, Poly) else Poly(q)
    delta = _delta(p)
    if q.degree < 1:
        raise PreconditionError("deg q must be at least 1")
    q0 = q[0]
    if abs(q0) <= 1:
        raise PreconditionError(f"|q(0)| = {abs(q0)} <= 1: the defining series need not converge")
    terms = cantor_terms(delta, N)
    H = terms - 1
    qs = TruncatedSeries.from_poly(q)
    ps = rational_series(p, N)
    it = TruncatedSeries.from_poly(Poly.x(), N)
    prod = TruncatedSeries.from_poly(Poly.const(1), N)
    total = TruncatedSeries.zero(N)
    for _ in range(H):
        prod = prod * series_compose_inner(qs, it, N)
        total = total + prod.inverse(N)
        it = series_compose_inner(ps, it, N)
    total = total + prod.inverse(N) * (ONE / (q0 - 1))
    theta = total
    res = cantor_residual(theta, p, q, N)
    if not res.is_zero_mod(N):
        raise MahlerError("internal: Cantor series fails its functional equation")
    return (theta, terms) if return_terms else theta


def cantor_residual(theta, p, q, N):
    """q(z) theta(z) - 1 - theta(p(z)) mod z^N."""
    tp = series_compose_inner(theta, _as_rf(p), N)
    return TruncatedSeries.from_poly(q, N) * theta.truncate(N) - 1 - tp


def cantor_system(p, q):
    """theta(p) = q theta - 1 written as q theta = theta(p) + 1."""
    q = q if isinstance(q, Poly) else Poly(q)
    return MahlerSystem(q, [[Poly.const(1)]], [Poly.const(1)], _as_rf(p))


def _eval_poly_acb(p, x):
    from ..dynamics.balls import acb_q

    acc = flint.acb(0)
    for c in reversed(p.coeffs):
        acc = acc * x + acb_q(c)
    return acc


def chebyshev_tau_series(N, mode="formal"):
    """tau(z) = sum_{k>=1} T_2^[k](z) has no formal expansion at 0.

    T_2^[k](0) = +-1 for every k, so the constant term diverges.
    """
    if mode == "formal":
        raise RejectedError("sum of T_2 iterates has a divergent constant term as a formal series at 0")
    raise PreconditionError("use chebyshev_tau_numeric for point evaluation")


def chebyshev_tau_numeric(y, prec=256, kmax=64):
    """Ball value of sum_{k>=1} T_2^[k](y), provided the iterates tend to 0.

    No orbit of T_2 tends to 0: if |w| < 1/2 then |T_2(w) + 1| = 2|w|^2 < 1/2,
    so |T_2(w)| > 1/2. The orbit is still computed (it is returned in the
    error for inspection) and the call always ends in NoConvergenceError.
    """
    from ..dynamics.balls import to_acb

    T2 = chebyshev(2)
    orbit = []
    with flint.ctx.workprec(prec):
        x = to_acb(y)
        for _ in range(kmax):
            x = _eval_poly_acb(T2, x)
            orbit.append(x)
            if x.abs_upper() < flint.arb(1) / 2:
                nxt = _eval_poly_acb(T2, x)
                orbit.append(nxt)
                err = NoConvergenceError(
                    f"iterate {len(orbit) - 1} has |T_2^[k](y)| < 1/2, so the next one exceeds 1/2; "
                    "the terms of the tau sum cannot tend to 0"
                )
                err.orbit = orbit
                raise err
    err = NoConvergenceError("T_2 iterates do not tend to 0 (no orbit of T_2 does)")
    err.orbit = orbit
    raise err


def chebyshev_commutation_table(nmax=8):
    """{(m, n): T_m(T_n) == T_n(T_m)} for 1 <= m, n <= nmax."""
    T = {k: chebyshev(k) for k in range(1, nmax + 1)}
    return {(m, n): T[m](T[n]) == T[n](T[m]) for m in range(1, nmax + 1) for n in range(1, nmax + 1)}


def m_series(N):
    """Coefficients of M(z) = sum_k z^(2^k) directly from the definition."""
    c = [0] * N
    k = 1
    while k < N:
        c[k] = 1
        k *= 2
    return TruncatedSeries(c, N)
