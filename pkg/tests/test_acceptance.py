"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import time
from contextlib import contextmanager

import flint
import pytest
from flint import arb
from gmpy2 import mpq
from mpmath import mp, mpf

from mahler.algebra.multipoly import MultiPoly
from mahler.algebra.poly import Poly, chebyshev, chebyshev_recurrence, poly_compose
from mahler.auxpoly import (
    SystemSeries,
    bound_flags,
    double_bound_scan,
    exact_series_identity,
    mutate,
    pushforward_chain,
    siegel_polynomial,
    verify_identity,
)
from mahler.dynamics.orbit import iterate, orbit_bounds, reverify_mpmath
from mahler.mahler_system import (
    cantor_residual,
    cantor_series,
    cantor_system,
    check_chi_independence,
    chi_system,
    solve_series,
)
from mahler.measure import dirichlet_report, exponent_ia1, exponent_ia2, exponent_thm2, lll_small_value_probe, m_at
from mahler.multiplicity import SupportSet, grid_scan, max_vanishing_order

Z2 = Poly([0, 0, 1])
HALF = mpq(1, 2)


@contextmanager
def criterion(num, label):
    t = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"\ncriterion {num:>2} FAIL  {label}  ({time.perf_counter() - t:.2f} s)")
        raise
    print(f"\ncriterion {num:>2} PASS  {label}  ({time.perf_counter() - t:.2f} s)")


def _siegel(ss, D):
    sup = SupportSet.grid(D, 2)
    Nm = 4 * sup.card + 64
    return siegel_polynomial(ss.vector(Nm), sup, None, Nm)


def test_01_functional_equation_residuals(m_system):
    with criterion(1, "residuals exactly 0 mod z^256 (M, chi i <= 4, Cantor)"):
        N = 256
        t = time.perf_counter()
        assert solve_series(m_system, N, [mpq(0)]).check()
        assert time.perf_counter() - t < 10
        for i in range(1, 5):
            t = time.perf_counter()
            assert solve_series(chi_system(Z2, Poly.monomial(2 * i + 1)), N, [mpq(0)]).check()
            assert time.perf_counter() - t < 10
        t = time.perf_counter()
        q = Poly([2, 1])
        theta = cantor_series(Z2, q, N)
        assert cantor_residual(theta, Z2, q, N).is_zero_mod(N)
        assert solve_series(cantor_system(Z2, q), N).check()
        assert time.perf_counter() - t < 10


def test_02_m_series_exact(m_system):
    with criterion(2, "M coefficients through z^64 are 1 exactly at 2^k"):
        c = solve_series(m_system, 65, [mpq(0)]).f[0].coefficients(65)
        pow2 = {2**k for k in range(7)}
        assert all(c[i] == (1 if i in pow2 else 0) for i in range(65))


def test_03_chebyshev_commutation():
    with criterion(3, "T_m(T_n) = T_n(T_m), 1 <= m, n <= 8, closed form = recurrence"):
        T = {k: chebyshev(k) for k in range(1, 9)}
        assert all(T[k] == chebyshev_recurrence(k) for k in T)
        for m in T:
            for n in T:
                assert poly_compose(T[m], T[n]) == poly_compose(T[n], T[m])


def test_04_orbit_certificate():
    with criterion(4, "|p^[T](1/2)| = 2^-2^T, c3 = 1/2, double inequality for T <= 20"):
        t = time.perf_counter()
        it = iterate(Z2, HALF, 20)
        assert all(b.real == arb(2) ** (-(2**T)) and b.imag == 0 for T, b in enumerate(it))
        cert = orbit_bounds(Z2, HALF, 20)
        with flint.ctx.workprec(256):
            slack = arb(2) ** -64 / 2
            assert abs(cert.c3_lower - arb(1) / 2) < slack
            assert abs(cert.c3_upper - arb(1) / 2) < slack
        assert cert.verified == list(range(21))
        ok, _ = reverify_mpmath(cert, Z2, HALF)
        assert ok
        assert time.perf_counter() - t < 5


def test_05_multiplicity(m_series):
    with criterion(5, "T0 = 3 with witness M(1-z) - z; T0/card <= 3 and K1 trend for D = 2..5"):
        t = time.perf_counter()
        res = max_vanishing_order(m_series.vector(16), SupportSet.grid(2, 2), 16)
        ref = MultiPoly({(0, 1): 1, (1, 0): -1, (1, 1): -1}, 2)
        s = res.witness.coeff((0, 1))
        assert res.T0 == 3 and res.witness == ref * MultiPoly.const(s, 2)
        rows = grid_scan(m_series.vector(512), range(2, 6), 512)
        print("\n  D card T0 ratio  min_K1(X slots)  min_K1(total degree)")
        for r in rows:
            print(f"  {r['D']} {r['card']:>4} {r['T0']:>2} {str(r['ratio']):>6}  {str(r['min_K1']):>14}  {str(r['min_K1_total']):>18}")
        assert all(r["ratio"] <= 3 and r["routes_agree"] for r in rows)
        tot = [r["min_K1_total"] for r in rows]
        assert all(a >= b for a, b in zip(tot, tot[1:]))
        assert time.perf_counter() - t < 300


def test_06_pushforward_identity(m_system, m_series):
    with criterion(6, "pushforward identity T = 0..6 at y = 1/2; exact at T = 1; mutation breaks it"):
        P0 = _siegel(m_series, 2)
        chain, _ = pushforward_chain(P0, m_system, 6)
        for P in chain:
            rep = verify_identity(P, m_system, HALF, P0.poly, m_series, 256)
            assert rep.contains_zero
            with flint.ctx.workprec(512):
                rad = arb(rep.diff.real.rad()) + arb(rep.diff.imag.rad())
                assert rad < rep.scale * arb(2) ** -128
            for e in list(P.poly.terms) + [(0, 0)]:
                bad = verify_identity(mutate(P, e), m_system, HALF, P0.poly, m_series, 256, exact_T_max=-1)
                assert not bad.contains_zero
        assert exact_series_identity(chain[1], m_system, P0.poly, m_series, 128)
        # T = 1 at the point itself, rational arithmetic with M(1/2) truncated on both sides consistently
        z = HALF
        fz = sum(mpq(1, 2 ** (2**k)) for k in range(12))
        fz2 = fz - z  # M(z^2) = M(z) - z exactly, applied to the same truncation
        lhs = chain[1].poly.evaluate(z, [fz])
        rhs = P0.poly.evaluate(z * z, [fz2])
        assert lhs == rhs


@pytest.mark.parametrize("D", [2, 3])
def test_07_bound_bookkeeping(m_system, m_series, D):
    with criterion(7, f"degree and length envelopes, D = {D}, T <= 8; deg_X < nD"):
        chain, consts = pushforward_chain(_siegel(m_series, D), m_system, 8)
        for P in chain:
            f = bound_flags(P, consts)
            assert f["deg_z_ok"] and f["length_ok"] and f["deg_X_ok"]
            assert P.deg_X < m_system.n * D


def test_08_double_bound_band(m_system, m_series):
    with criterion(8, "normalized log-values in a fixed negative band, T = 4..10, 384 bits"):
        t = time.perf_counter()
        sc = double_bound_scan(2, m_system, HALF, range(4, 11), 384, ss=m_series)
        assert all(r.negative for r in sc.rows)
        # direct evaluation oracle at T = 4 and T = 10
        chain, _ = pushforward_chain(_siegel(m_series, 2), m_system, 10)
        mp.dps = 1500
        m = sum(mpf(2) ** -(2**k) for k in range(14))
        for r in (sc.rows[0], sc.rows[-1]):
            v = sum(mpf(int(c)) * mpf(2) ** -a * m**b for (a, b), c in chain[r.T].poly.items())
            assert abs(float(mp.log(abs(v)) / (4 * 2**r.T)) - float(r.normalized.mid())) < 1e-12
        lo, hi = sc.band(7)
        print(f"\n  band over T = 7..10: [{-hi.mid()}, {-lo.mid()}]")
        assert float((hi - lo) / lo) < 0.25
        assert time.perf_counter() - t < 120


def test_09_exponent_examples():
    with criterion(9, "worked exponent values reproduce exactly"):
        e = exponent_ia1(1, 0, 2, 2)
        assert (e.outer, e.theta_inner) == (1, 2)
        e = exponent_ia2(2, 0, 2, 2)
        assert (e.outer, e.dW_exp) == (mpq(5, 2), -1)
        assert exponent_thm2(1, 0, 2, 2).theta_inner == 3
        for n in range(1, 11):
            r = dirichlet_report(n, 2, 2)
            assert r.theta_inner == n + 2 and isinstance(r.theta_inner, type(mpq(1)))


def test_10_probe_soundness():
    with criterion(10, "probe finds 2X - 1 at 1/2; M(1/2) cells sound and within the measure shape"):
        t = time.perf_counter()
        rep = lll_small_value_probe([HALF], 1, 10)
        assert rep.exact_vanishing == ["2*X1 - 1"]
        with flint.ctx.workprec(576):
            v = m_at(HALF, 576)
        rep = lll_small_value_probe([v], 8, 2**32, precision=512)
        assert not rep.exact_vanishing
        for c in rep.cells:
            if c.log_abs is not None:
                assert c.sound and c.log_abs.upper() >= c.log_lower.lower()
                assert c.consistent is not False
        assert rep.sound and rep.consistent
        assert time.perf_counter() - t < 600


def test_11_condition_checker():
    import random

    import flint as fl

    with criterion(11, "chi condition accepts q_i = z^(2i+1), rejects q = z^2, invariant under recombination"):
        qs = [Poly.monomial(2 * i + 1) for i in range(1, 5)]
        good = check_chi_independence(Z2, qs)
        assert good.accepted
        assert not check_chi_independence(Z2, [Poly.monomial(2)]).accepted
        rng = random.Random(11)
        for _ in range(5):
            while True:
                M = [[rng.randint(-4, 4) for _ in range(4)] for _ in range(4)]
                if fl.fmpz_mat(M).det() != 0:
                    break
            mixed = [sum((qs[j] * M[i][j] for j in range(4)), Poly()) for i in range(4)]
            rep = check_chi_independence(Z2, mixed)
            assert rep.accepted == good.accepted
            assert sorted(rep.pivot_degrees) == sorted(good.pivot_degrees)
