"""Helpers around python-flint balls (arb / acb)."""

import flint
import gmpy2
from flint import acb, arb, fmpq

from ..algebra.scalars import Q

ComplexBall = acb
workprec = flint.ctx.workprec


def q_to_fmpq(x):
    x = Q(x)
    return fmpq(int(x.numerator), int(x.denominator))


def arb_q(x):
    return arb(q_to_fmpq(x))


def acb_q(x):
    return acb(q_to_fmpq(x))


def to_acb(x):
    """Enclosure of x as an acb at the current working precision."""
    if isinstance(x, acb):
        return x
    if isinstance(x, arb):
        return acb(x)
    if hasattr(x, "enclosure"):
        return x.enclosure(flint.ctx.prec)
    if isinstance(x, complex):
        raise TypeError("floating-point points are not accepted; use exact rationals")
    if isinstance(x, tuple) and len(x) == 2:
        return acb(arb_q(x[0]), arb_q(x[1]))
    return acb_q(x)


def dyadic(x):
    """Exact mpq value of an exact arb (e.g. a midpoint or radius)."""
    m, e = x.man_exp()
    m, e = int(m), int(e)
    if e >= 0:
        return gmpy2.mpq(m << e)
    return gmpy2.mpq(m, 1 << -e)


def arb_mid_q(x):
    return dyadic(x.mid())


def arb_rad_q(x):
    return dyadic(x.rad())


def contains_zero(x):
    return x.contains(0)


def abs_upper_q(x):
    """Rational upper bound for |x| (exact dyadic)."""
    return dyadic(x.abs_upper())


def abs_lower_q(x):
    return dyadic(x.abs_lower())


def rel_radius_ok(x, bits):
    """True if rad(x) < 2^-bits * |x|, decided in arb arithmetic (no huge rationals)."""
    r = x.rad()
    if r == 0:
        return True
    lo = x.abs_lower()
    return bool(lo > 0 and r < lo * arb(2) ** (-bits))


def _acb_rad(x):
    return arb_rad_q(x.real) + arb_rad_q(x.imag)


def acb_rad_q(x):
    """Upper bound for the radius of a complex ball (sum of the box sides)."""
    return _acb_rad(x)


def _sig_digits_for(prec):
    return max(20, int(prec * 0.30103) + 5)


def arb_json(x, prec=None):
    """{mid, rad} decimal strings whose interval contains x."""
    if prec is None:
        prec = flint.ctx.prec
    txt = x.str(_sig_digits_for(prec), radius=True, more=True)
    if txt.startswith("[+/-"):
        return {"mid": "0", "rad": txt[5:-1].strip()}
    if txt.startswith("["):
        mid, rad = txt[1:-1].split(" +/- ")
        return {"mid": mid.strip(), "rad": rad.strip()}
    return {"mid": txt.strip(), "rad": "0"}


def ball_json(x, prec=None):
    if isinstance(x, arb):
        return arb_json(x, prec)
    x = to_acb(x)
    return {"re": arb_json(x.real, prec), "im": arb_json(x.imag, prec)}


def ball_from_json(d):
    """Rebuild a ball from ``ball_json`` output (contains the original)."""
    if "re" in d:
        return acb(ball_from_json(d["re"]), ball_from_json(d["im"]))
    if d["rad"] == "0":
        return arb(d["mid"])
    return arb(f"[{d['mid']} +/- {d['rad']}]")


def log2_upper(x):
    """Upper bound for log2 of a positive rational."""
    x = Q(x)
    return int(gmpy2.bit_length(x.numerator)) - int(gmpy2.bit_length(x.denominator)) + 1
