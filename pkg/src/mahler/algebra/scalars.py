"""Exact rational scalars (gmpy2) and their text form."""

from fractions import Fraction

import gmpy2
from gmpy2 import mpq, mpz

ZERO = mpq(0)
ONE = mpq(1)


def Q(x):
    """Coerce ``x`` to an exact ``mpq``.

    Accepts ints, ``Fraction``, ``mpz``/``mpq``, python-flint ``fmpz``/``fmpq``
    and strings such as ``"3"``, ``"-7/12"``. Floats are refused: the toolkit
    has no floating-point coefficient mode.
    """
    if isinstance(x, type(ONE)):
        return x
    if isinstance(x, (int, type(mpz(0)))):
        return mpq(x)
    if isinstance(x, float):
        raise TypeError("floating-point coefficients are not accepted")
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip().replace(" ", "")
        if "/" in s:
            n, d = s.split("/")
            return mpq(int(n), int(d))
        return mpq(int(s))
    # python-flint fmpz / fmpq
    if hasattr(x, "p") and hasattr(x, "q"):
        return mpq(int(x.p), int(x.q))
    try:
        return mpq(int(x))
    except (TypeError, ValueError):
        raise TypeError(f"cannot coerce {type(x).__name__} to an exact rational") from None


def qstr(x) -> str:
    """Canonical decimal string: ``"n"`` or ``"n/d"``."""
    x = Q(x)
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{int(x.numerator)}/{int(x.denominator)}"


def is_integer(x) -> bool:
    return Q(x).denominator == 1


def lcm_denominators(values) -> int:
    out = mpz(1)
    for v in values:
        out = gmpy2.lcm(out, Q(v).denominator)
    return int(out)


def gcd_numerators(values) -> int:
    out = mpz(0)
    for v in values:
        out = gmpy2.gcd(out, Q(v).numerator)
    return int(out)


def bitsize(x) -> int:
    x = Q(x)
    return int(gmpy2.bit_length(x.numerator)) + int(gmpy2.bit_length(x.denominator))
