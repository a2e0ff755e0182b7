import flint
import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from mahler.linalg import _kernels
from mahler.linalg.exact import bareiss, kernel_exact, left_kernel_exact, mat_vec, rank_exact
from mahler.linalg.lll import lll, sq_norm
from mahler.linalg.modular import kernel_modular, primes, rank_profile_mod, rational_reconstruct


def matrices(max_rows=6, max_cols=7, lo=-9, hi=9):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


@given(matrices())
def test_rank_matches_flint(A):
    assert rank_exact(A) == flint.fmpz_mat(A).rank()


@given(matrices())
def test_kernel_is_kernel_with_right_dimension(A):
    K = kernel_exact(A)
    n = len(A[0])
    assert len(K) == n - flint.fmpz_mat(A).rank()
    for v in K:
        assert all(x == 0 for x in mat_vec(A, v))


@given(matrices())
def test_left_kernel(A):
    for c in left_kernel_exact(A):
        for j in range(len(A[0])):
            assert sum(c[i] * A[i][j] for i in range(len(A))) == 0


@given(matrices())
@settings(max_examples=40, deadline=None)
def test_modular_kernel_agrees_with_exact(A):
    Ke = kernel_exact(A)
    Km, used = kernel_modular(A)
    assert used
    # same span: stacking one basis under the other does not raise the rank
    assert len(Ke) == len(Km)
    if Ke:
        assert flint.fmpz_mat([[int(x) for x in v] for v in Ke + Km]).rank() == len(Ke)


def test_bareiss_integral():
    E, piv = bareiss([[2, 4, 1], [1, 3, 5], [3, 7, 6]])
    assert piv == [0, 1]
    assert all(isinstance(int(x), int) for r in E for x in r)


def test_rational_reconstruct():
    m = primes(1)[0]
    a = (3 * pow(7, -1, m)) % m
    assert rational_reconstruct(a, m) == mpq(3, 7)


def _gso_sq(B):
    Bs = []
    for b in B:
        v = [mpq(x) for x in b]
        for u in Bs:
            mu = sum(x * y for x, y in zip(v, u)) / sum(y * y for y in u)
            v = [x - mu * y for x, y in zip(v, u)]
        Bs.append(v)
    return Bs


@given(st.integers(2, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-50, 50), min_size=n, max_size=n), min_size=n, max_size=n)))
@settings(max_examples=40)
def test_lll_reduced_and_same_lattice(B):
    if flint.fmpz_mat(B).rank() < len(B):
        return
    R = lll(B)
    # same lattice: equal Hermite normal forms
    assert flint.fmpz_mat(R).hnf() == flint.fmpz_mat(B).hnf()
    Bs = _gso_sq(R)
    n2 = [sum(x * x for x in v) for v in Bs]
    for i in range(1, len(R)):
        for j in range(i):
            mu = sum(mpq(x) * y for x, y in zip(R[i], Bs[j])) / n2[j]
            assert abs(mu) <= mpq(1, 2)
        mu = sum(mpq(x) * y for x, y in zip(R[i], Bs[i - 1])) / n2[i - 1]
        assert n2[i] >= (mpq(3, 4) - mu * mu) * n2[i - 1]


def test_lll_finds_small_relation():
    R = lll([[1, 0, 1 << 20], [0, 1, 1 << 19]])
    assert min(sq_norm(r) for r in R) == 5


@given(matrices(8, 9, 0, 10**6))
@settings(max_examples=40, deadline=None)
def test_rref_numba_numpy_agree(A):
    if _kernels.rref_mod_numba is None:
        pytest.skip("numba path unavailable")
    p = primes(1)[0]
    R1, p1, r1 = _kernels.rref_mod_numpy(np.array(A), p)
    R2, p2, r2 = _kernels.rref_mod_numba(np.array(A), p)
    assert r1 == r2 and list(p1) == list(p2)
    assert np.array_equal(R1[:r1], R2[:r2])


def test_rank_profile():
    assert rank_profile_mod([[0, 1, 2], [0, 2, 4], [1, 0, 0]]) == [0, 1]
