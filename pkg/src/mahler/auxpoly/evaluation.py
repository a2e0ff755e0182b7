"""Ball evaluation of power series at points inside the unit disc, with tail bounds.

The tail model is a coefficient envelope |c_k| <= H (k+2)^e measured on the
computed coefficients: e is the least integer for which the envelope over the
upper half of the computed range does not exceed the one over the lower half.
"""

import flint
from flint import acb, arb

from ..algebra.scalars import ZERO
from ..dynamics.balls import acb_q, arb_q
from ..errors import TailBoundError

MAX_ENVELOPE_EXP = 32


class Envelope:
    def __init__(self, H, e):
        self.H = H
        self.e = e

    def to_json(self):
        return {"H": str(self.H), "e": self.e}


def measure_envelope(coeffs):
    N = len(coeffs)
    if N < 4:
        raise TailBoundError("too few coefficients to measure a growth envelope")
    abss = [abs(c) for c in coeffs]
    half = N // 2
    for e in range(MAX_ENVELOPE_EXP + 1):
        lo = max((abss[k] / (k + 2) ** e for k in range(half)), default=ZERO)
        hi = max((abss[k] / (k + 2) ** e for k in range(half, N)), default=ZERO)
        if hi <= lo or hi == 0:
            H = max(lo, hi)
            return Envelope(H, e)
    raise TailBoundError("coefficient growth is not polynomially bounded on the computed range")


def tail_bound(env: Envelope, N, r):
    """Upper bound for sum_{k>=N} H (k+2)^e r^k as an arb (r an arb upper bound for |w|)."""
    if env.H == 0:
        return arb(0)
    ratio = (arb(N + 3) / (N + 2)) ** env.e * r
    if not ratio < 1:
        raise TailBoundError(f"|w| = {r} too close to 1 for the coefficient envelope")
    val = arb_q(env.H) * arb(N + 2) ** env.e * r**N / (1 - ratio)
    return val.mid() + val.rad()


def horner_coeffs(coeffs, w):
    acc = acb(0)
    for c in reversed(coeffs):
        acc = acc * w + (acb_q(c) if c else 0)
    return acc


def eval_with_tail(coeffs, env, w):
    """sum_k coeffs[k] w^k plus a ball covering the envelope tail."""
    r = arb(w.abs_upper())
    t = tail_bound(env, len(coeffs), r)
    v = horner_coeffs(coeffs, w)
    err = arb(0, t)
    return acb(v.real + err, v.imag + err)


def terms_needed(env, r_upper, bits, start=0, cap=1 << 16):
    """Smallest N (>= start) whose envelope tail at |w| <= r is below 2^-bits."""
    if env.H == 0:
        return max(start, 1)
    target = arb(2) ** (-bits)
    if not r_upper < 1:
        raise TailBoundError("evaluation point is not inside the unit disc")
    N = max(start, 4)
    while N <= cap:
        ratio = (arb(N + 3) / (N + 2)) ** env.e * r_upper
        if ratio < 1:
            t = arb_q(env.H) * arb(N + 2) ** env.e * r_upper**N / (1 - ratio)
            if t < target:
                return N
        N = N + max(8, N // 4)
    raise TailBoundError(f"more than {cap} terms needed at |w| <= {r_upper}")


class SeriesEvaluator:
    """Evaluates a family of exact series, extending them on demand.

    ``extend(N)`` must return coefficient lists (one per series) of length N.
    """

    def __init__(self, extend, N0=64, cap=1 << 14):
        self._extend = extend
        self.cap = cap
        self.N = 0
        self._grow(N0)

    def _grow(self, N):
        N = min(max(N, 8), self.cap)
        self.coeffs = self._extend(N)
        self.N = N
        self.envelopes = [measure_envelope(c) for c in self.coeffs]

    def __call__(self, w, bits):
        """Balls for every series at w with absolute tail below 2^-bits."""
        r = arb(w.abs_upper())
        need = max(terms_needed(env, r, bits, cap=self.cap) for env in self.envelopes)
        if need > self.N:
            self._grow(need + need // 8)
            need = max(terms_needed(env, r, bits, cap=self.cap) for env in self.envelopes)
            if need > self.N:
                raise TailBoundError(f"needed {need} coefficients, cap {self.cap}")
        return [eval_with_tail(c[:need], env, w) for c, env in zip(self.coeffs, self.envelopes)]

    def envelope_json(self):
        return [e.to_json() for e in self.envelopes]


def with_prec(prec):
    return flint.ctx.workprec(prec)
