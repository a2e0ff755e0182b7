import pytest
import sympy as sp
from flint import arb
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from mahler.algebra.algebraic import AlgebraicNumber
from mahler.algebra.multipoly import MultiPoly
from mahler.algebra.poly import Poly, RationalFunction
from mahler.auxpoly import (
    AuxPolynomial,
    SystemSeries,
    bound_flags,
    conjugate_norm_polynomial,
    double_bound_scan,
    exact_series_identity,
    measure_envelope,
    mutate,
    pushforward,
    pushforward_chain,
    siegel_polynomial,
    tail_bound,
    topfer_polynomial,
    verify_identity,
)
from mahler.errors import ConditionError, TailBoundError
from mahler.mahler_system import MahlerSystem
from mahler.multiplicity import SupportSet, witness_order

HALF = mpq(1, 2)
P0_HAND = MultiPoly({(0, 1): 1, (1, 0): -1, (1, 1): -1}, 2)  # X - z - zX


def _siegel(ss, D, n=1):
    sup = SupportSet.grid(D, n + 1)
    Nm = 4 * sup.card + 64
    return siegel_polynomial(ss.vector(Nm), sup, None, Nm)


def test_pushforward_hand_example(m_system, m_series):
    P1 = pushforward(AuxPolynomial(P0_HAND, 2), m_system)
    want = MultiPoly({(0, 1): 1, (1, 0): -1, (2, 0): -1, (3, 0): 1, (2, 1): -1}, 2)
    assert P1.poly == want
    assert exact_series_identity(P1, m_system, P0_HAND, m_series, 64)


def test_pushforward_scalar_case():
    # a = 1, A = (2), B = 0, p = z^2: q = 2, so X + 3 -> 2^2 (X/2 + 3)
    s = MahlerSystem(Poly.const(1), [[Poly.const(2)]], [Poly()], RationalFunction(Poly([0, 0, 1])))
    P = AuxPolynomial(MultiPoly({(0, 1): 1, (0, 0): 3}, 2), 2)
    P1 = pushforward(P, s)
    assert P1.poly == MultiPoly({(0, 1): 2, (0, 0): 12}, 2)


def test_siegel_polynomial_properties(m_series):
    P0 = _siegel(m_series, 2)
    prov = P0.provenance[0]
    assert P0.poly.is_integral() and not P0.poly.is_zero()
    assert prov["order"] >= prov["t_D"] and prov["length_within_bound"]
    assert witness_order(P0.poly, m_series.vector(80), 80) == prov["order"]


def test_identity_chain_and_mutation(m_system, m_series):
    P0 = _siegel(m_series, 2)
    chain, _ = pushforward_chain(P0, m_system, 6)
    for P in chain:
        rep = verify_identity(P, m_system, HALF, P0.poly, m_series, 256)
        assert rep.holds, P.T
        for e in list(P.poly.terms)[:4] + [(0, 0)]:
            bad = verify_identity(mutate(P, e), m_system, HALF, P0.poly, m_series, 256, exact_T_max=-1)
            assert not bad.contains_zero


def test_identity_exact_at_T1(m_system, m_series):
    P0 = _siegel(m_series, 2)
    P1 = pushforward(P0, m_system)
    assert exact_series_identity(P1, m_system, P0.poly, m_series, 128)
    assert not exact_series_identity(mutate(P1), m_system, P0.poly, m_series, 128)


@pytest.mark.parametrize("D", [2, 3])
def test_bound_flags(m_system, m_series, D):
    P0 = _siegel(m_series, D)
    chain, consts = pushforward_chain(P0, m_system, 8)
    for P in chain:
        f = bound_flags(P, consts)
        assert f["deg_z_ok"] and f["deg_X_ok"] and f["length_ok"], f
        assert P.deg_X < m_system.n * D


def _direct_normalized(P, T, D, dps):
    """log|P_T(1/2, M(1/2))| / (D^2 2^T) by plain mpmath evaluation (no product form)."""
    mp.dps = dps
    y = mpf(1) / 2
    m = sum(y ** (2**k) for k in range(16))
    v = mpf(0)
    for (a, b), c in P.poly.items():
        v += mpf(int(c.numerator)) / int(c.denominator) * y**a * m**b
    return mp.log(abs(v)) / (D**2 * 2**T)


def test_double_bound_band_matches_direct_evaluation(m_system, m_series):
    sc = double_bound_scan(2, m_system, HALF, range(4, 11), 384, ss=m_series)
    chain, _ = pushforward_chain(_siegel(m_series, 2), m_system, 10)
    for r in sc.rows:
        direct = _direct_normalized(chain[r.T], r.T, 2, 2000)
        assert abs(float(r.normalized.mid()) - float(direct)) < 1e-12
        assert r.negative
    lo, hi = sc.band(7)
    assert float((hi - lo) / lo) < 0.25


def test_conjugate_norm_vs_resultant():
    y = AlgebraicNumber(Poly([-1, 0, 2]), near=0.7)
    P = MultiPoly({(0, 1): 1, (1, 0): -1, (1, 1): -1, (3, 2): 5}, 2)
    out = conjugate_norm_polynomial(P, y)
    z, X = sp.symbols("z X")
    res = sp.Poly(sp.resultant(2 * z**2 - 1, X - z - z * X + 5 * z**3 * X**2, z), X)
    # den(y)^(t K) / lc(m)^K = 2^6 / 2^3
    want = {(0, k[0]): mpq(int(c) * 8) for k, c in res.terms()}
    assert out.terms == want
    assert out.deg_X() <= 2 * P.deg_X()


@given(
    st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 2)), st.integers(-5, 5), min_size=1, max_size=5),
    st.sampled_from([[-1, 0, 2], [-2, 0, 3], [1, 1, 3], [-3, 0, 0, 2]]),
)
@settings(max_examples=30, deadline=None)
def test_conjugate_norm_integral(terms, m):
    terms = {e: c for e, c in terms.items() if c}
    if not terms:
        return
    y = AlgebraicNumber(Poly(m), index=0)
    out = conjugate_norm_polynomial(MultiPoly(terms, 2), y)
    assert out.is_integral()
    assert out.deg_z() <= 0


def test_topfer_condition_and_pipeline(m_system, m_series):
    with pytest.raises(ConditionError):
        topfer_polynomial(m_system, 2, 1, HALF, C3=1, ss=m_series)
    R, rep = topfer_polynomial(m_system, 2, 3, HALF, C3=1, ss=m_series)
    chain, _ = pushforward_chain(_siegel(m_series, 2), m_system, 3)
    assert R.poly == chain[3].poly  # polynomial p: nothing to clear
    assert rep.value.negative and rep.deg_X_within_D


def test_envelope_tail():
    env = measure_envelope([mpq(k + 1) for k in range(32)])
    # (k+1)/(k+2) still creeps upward, so the envelope needs e = 2
    assert env.e == 2
    t = tail_bound(env, 32, arb(1) / 2)
    exact = sum(mpq(k + 1) / 2**k for k in range(32, 400))
    assert arb(t) >= float(exact)
    with pytest.raises(TailBoundError):
        tail_bound(env, 32, arb(1))
