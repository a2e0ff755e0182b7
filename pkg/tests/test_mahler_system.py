import random
import time

import pytest
from gmpy2 import mpq

from mahler.algebra.poly import Poly, RationalFunction, chebyshev, poly_iterate
from mahler.algebra.series import TruncatedSeries, series_compose_inner
from mahler.errors import AmbiguousError, NoConvergenceError, PreconditionError, RejectedError
from mahler.mahler_system import (
    MahlerSystem,
    cantor_residual,
    cantor_series,
    cantor_system,
    cantor_terms,
    check_chi_independence,
    chebyshev_commutation_table,
    chebyshev_tau_numeric,
    chebyshev_tau_series,
    chi_series,
    chi_system,
    m_series,
    solve_series,
)

Z2 = Poly([0, 0, 1])


def test_m_series_definition():
    c = m_series(200).coefficients(200)
    assert [k for k, v in enumerate(c) if v] == [1, 2, 4, 8, 16, 32, 64, 128]


def test_m_system_needs_seed(m_system):
    with pytest.raises(AmbiguousError):
        solve_series(m_system, 16)


def test_m_system_matches_definition(m_system):
    sol = solve_series(m_system, 128, [mpq(0)])
    assert sol.check()
    assert sol.f[0].coefficients(128) == m_series(128).coefficients(128)


def test_chi_series_against_direct_sum():
    # chi(z) = sum_k q(p^[k](z)) for p = z^2, q = z^3: exponents 3 * 2^k
    N = 100
    c = chi_series(Z2, Poly.monomial(3), N).coefficients(N)
    assert [k for k, v in enumerate(c) if v] == [3, 6, 12, 24, 48, 96]
    sol = solve_series(chi_system(Z2, Poly.monomial(3)), N, [mpq(0)])
    assert sol.f[0].coefficients(N) == c


def test_cantor_closed_form_agrees_with_solver():
    q = Poly([2, 1])
    N = 128
    theta, terms = cantor_series(Z2, q, N, return_terms=True)
    assert cantor_residual(theta, Z2, q, N).is_zero_mod(N)
    assert terms == 8  # ceil(log2 128) + 1
    sol = solve_series(cantor_system(Z2, q), N)
    assert sol.f[0].coefficients(N) == theta.coefficients(N)


def test_cantor_terms():
    assert cantor_terms(2, 256) == 9
    assert cantor_terms(3, 10) == 4


def test_cantor_rejects_small_q0():
    with pytest.raises(PreconditionError):
        cantor_series(Z2, Poly([1, 1]), 8)


def test_cantor_value_oracle():
    # independent route: direct partial sums with mpmath, enough terms for 1e-40
    from mpmath import mp, mpf

    from mahler.cli.examples import cantor_value

    mp.dps = 60
    y = mpf(1) / 3
    s, pr, w = mpf(0), mpf(1), y
    for _ in range(200):
        pr *= w + 2
        s += 1 / pr
        w = w * w
    v = cantor_value(mpq(1, 3), 256)
    assert abs(mpf(v.mid().str(60, radius=False)) - s) < mpf(10) ** -40


def test_chebyshev_commutation():
    assert all(chebyshev_commutation_table(8).values())
    assert poly_iterate(chebyshev(2), 2) == chebyshev(4)


def test_chebyshev_tau_rejected_formally_and_diverges_numerically():
    with pytest.raises(RejectedError):
        chebyshev_tau_series(16)
    with pytest.raises(NoConvergenceError) as ei:
        chebyshev_tau_numeric(mpq(1, 3), prec=128, kmax=16)
    assert ei.value.orbit


def test_chi_condition_accepts_and_rejects():
    good = check_chi_independence(Z2, [Poly.monomial(2 * i + 1) for i in range(1, 5)])
    assert good.accepted
    bad = check_chi_independence(Z2, [Poly.monomial(2)])
    assert not bad.accepted and bad.failing_degrees == [2]


def _random_invertible(n, rng):
    while True:
        M = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        import flint

        if flint.fmpz_mat(M).det() != 0:
            return M


@pytest.mark.parametrize("seed", range(3))
def test_chi_condition_invariant_under_recombination(seed):
    rng = random.Random(seed)
    qs = [Poly.monomial(2 * i + 1) for i in range(1, 5)]
    M = _random_invertible(4, rng)
    mixed = [sum((qs[j] * M[i][j] for j in range(4)), Poly()) for i in range(4)]
    a, b = check_chi_independence(Z2, qs), check_chi_independence(Z2, mixed)
    assert a.accepted == b.accepted
    assert sorted(a.pivot_degrees) == sorted(b.pivot_degrees)


def test_system_json_round_trip(m_system):
    s2 = MahlerSystem.from_json(m_system.to_json())
    assert s2.to_json() == m_system.to_json()


def test_rational_p_composition():
    p = RationalFunction(Poly([0, 0, 1]), Poly([1, -1]))
    f = TruncatedSeries([1, 1, 1, 1, 1, 1, 1, 1], 8)
    s = series_compose_inner(f, p, 8)
    # z^2/(1-z) = z^2 + z^3 + ...; 1 + w + w^2 + ... at that w
    assert s.coefficients(4) == [1, 0, 1, 1]
