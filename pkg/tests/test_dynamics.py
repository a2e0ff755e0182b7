import time

import flint
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from mahler.algebra.poly import Poly, RationalFunction
from mahler.dynamics.balls import arb_json, ball_from_json, ball_json, dyadic
from mahler.dynamics.orbit import iterate, orbit_bounds, reverify_mpmath
from mahler.errors import PoleError

Z2 = Poly([0, 0, 1])


def test_square_orbit_exact():
    it = iterate(Z2, mpq(1, 2), 10)
    for T, b in enumerate(it):
        assert b.real == flint.arb(2) ** (-(2**T))
        assert b.imag == 0


def test_square_certificate_and_mpmath_route():
    cert = orbit_bounds(Z2, mpq(1, 2), 20)
    with flint.ctx.workprec(256):
        half = flint.arb(1) / 2
        assert abs(cert.c3_lower - half) < half * flint.arb(2) ** -64
        assert abs(cert.c3_upper - half) < half * flint.arb(2) ** -64
    ok, per_T = reverify_mpmath(cert, Z2, mpq(1, 2))
    assert ok and len(per_T) == 21


def test_rational_p_orbit_decays():
    p = RationalFunction(Poly([0, 0, 1]), Poly([1, -1]))
    cert = orbit_bounds(p, mpq(1, 3), 12)
    assert cert.T_s is not None
    assert reverify_mpmath(cert, p, mpq(1, 3))[0]


def test_pole_detected():
    p = RationalFunction(Poly([0, 0, 1]), Poly([1, -2]))
    with pytest.raises(PoleError):
        iterate(p, mpq(1, 2), 4)


@given(st.fractions(min_value=-10, max_value=10), st.integers(1, 40))
@settings(max_examples=50)
def test_ball_json_round_trip_contains(x, e):
    with flint.ctx.workprec(200):
        a = flint.arb(x.numerator) / x.denominator + flint.arb(0, flint.arb(2) ** -e)
        b = ball_from_json(arb_json(a, 200))
        assert b.contains(a)


def test_zero_mid_ball_json():
    a = flint.arb(0, 1e-5)
    assert ball_from_json(arb_json(a)).contains(a)


def test_dyadic_exact():
    assert dyadic(flint.arb(3) / 8) == mpq(3, 8)
