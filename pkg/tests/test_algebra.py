import flint
import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from mahler.algebra.multipoly import MultiPoly
from mahler.algebra.poly import Poly, RationalFunction, chebyshev, chebyshev_recurrence, poly_compose, poly_iterate
from mahler.algebra.scalars import Q, qstr
from mahler.algebra.series import TruncatedSeries, series_compose_inner

small = st.integers(-20, 20)
coeffs = st.lists(small, min_size=0, max_size=6)


def fq(p):
    return flint.fmpq_poly([flint.fmpq(int(c.numerator), int(c.denominator)) for c in p.coeffs])


def from_fq(f):
    return Poly([mpq(int(c.p), int(c.q)) for c in f.coeffs()])


def test_q_refuses_floats():
    with pytest.raises(TypeError):
        Q(0.5)
    assert Q("-7/12") == mpq(-7, 12)
    assert qstr(mpq(6, 3)) == "2"


@given(coeffs, coeffs)
def test_compose_matches_flint(a, b):
    f, g = Poly(a), Poly(b)
    assert poly_compose(f, g) == from_fq(fq(f)(fq(g)))


@given(coeffs, coeffs, coeffs)
@settings(max_examples=50)
def test_ring_laws(a, b, c):
    f, g, h = Poly(a), Poly(b), Poly(c)
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert poly_compose(poly_compose(f, g), h) == poly_compose(f, poly_compose(g, h))


@given(coeffs, st.lists(small, min_size=1, max_size=4).filter(lambda v: v[-1] != 0))
def test_divmod(a, b):
    f, g = Poly(a), Poly(b)
    q, r = f.divmod(g)
    assert q * g + r == f
    assert r.is_zero() or r.degree < g.degree


def test_chebyshev_closed_form_against_recurrence_and_sympy():
    x = sympy.Symbol("x")
    for n in range(1, 13):
        c = chebyshev(n)
        assert c == chebyshev_recurrence(n)
        ref = sympy.Poly(sympy.chebyshevt(n, x), x).all_coeffs()[::-1]
        assert [int(v) for v in c.coeffs] == [int(v) for v in ref]


def test_iterate_square():
    assert poly_iterate(Poly([0, 0, 1]), 3) == Poly.monomial(8)


def test_rational_function_rejects_zero_den():
    with pytest.raises(Exception):
        RationalFunction(Poly([1]), Poly([]))


@given(st.lists(small, min_size=1, max_size=8).filter(lambda v: v[0] != 0))
def test_series_inverse(a):
    N = 12
    s = TruncatedSeries([Q(x) for x in a], N)
    one = (s * s.inverse(N)).truncate(N)
    assert one.coefficients(N) == [1] + [0] * (N - 1)


@given(st.lists(small, min_size=1, max_size=6), st.integers(2, 3))
@settings(max_examples=40)
def test_series_compose_matches_polynomial_compose(a, k):
    N = 20
    f = Poly(a)
    p = Poly.monomial(k) + Poly.monomial(k + 1)
    s = series_compose_inner(TruncatedSeries.from_poly(f, N), RationalFunction(p), N)
    fp = poly_compose(f, p)
    assert s.coefficients(N) == [fp[i] for i in range(N)]


def test_multipoly_series_eval():
    # X1 - z - z X1 at (z, M) vanishes to order 3
    P = MultiPoly({(0, 1): 1, (1, 0): -1, (1, 1): -1}, 2)
    M = TruncatedSeries([0, 1, 1, 0, 1, 0, 0, 0, 1], 9)
    v = P.eval_series([M], 9)
    assert v.ord0() == 3


def test_json_round_trip():
    p = Poly([mpq(1, 2), 0, -3])
    assert Poly.from_json(p.to_json()) == p
    s = TruncatedSeries([1, 2, 3], 3)
    assert TruncatedSeries.from_json(s.to_json()).coefficients(3) == s.coefficients(3)
