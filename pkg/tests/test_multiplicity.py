import itertools

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from mahler.algebra.multipoly import MultiPoly
from mahler.algebra.series import TruncatedSeries
from mahler.errors import PreconditionError, SaturationError
from mahler.linalg.exact import integer_columns, rank_exact
from mahler.multiplicity import (
    KFunctionProfile,
    SupportSet,
    check_admissibility,
    check_multiplicity_bound,
    grid_scan,
    max_vanishing_order,
    monomial_matrix,
    t_D,
    witness_order,
)

# M(1 - z) - z written over the monomials (z^a X^b)
M_WITNESS = MultiPoly({(0, 1): 1, (1, 0): -1, (1, 1): -1}, 2)


def _exhaustive_T0(series, support, N):
    """Independent route: first t with the t-column matrix of full row rank, by direct rank calls."""
    rows = integer_columns(monomial_matrix(series, support, N))
    for t in range(N + 1):
        if rank_exact([r[:t] for r in rows]) == support.card:
            return t - 1
    return None


def test_z_and_m_grid_witness(m_series):
    vec = m_series.vector(16)
    res = max_vanishing_order(vec, SupportSet.grid(2, 2), 16)
    assert res.T0 == 3 and res.kernel_dimension == 1 and res.routes_agree
    w = res.witness
    ratio = w.terms[(0, 1)] / M_WITNESS.terms[(0, 1)]
    assert all(w.coeff(e) == ratio * M_WITNESS.coeff(e) for e in set(w.terms) | set(M_WITNESS.terms))
    assert witness_order(w, vec, 16) == 3
    assert _exhaustive_T0(vec, SupportSet.grid(2, 2), 16) == 3


def test_saturation_on_dependent_series():
    z = TruncatedSeries([0, 1] + [0] * 30, 32)
    z2 = TruncatedSeries([0, 0, 1] + [0] * 29, 32)
    with pytest.raises(SaturationError) as ei:
        max_vanishing_order([z, z2], SupportSet.grid(3, 2), 32)
    assert witness_order(ei.value.witness, [z, z2], 32) is None


@given(st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=2, max_size=6))
@settings(max_examples=25, deadline=None)
def test_support_monotonicity(exps):
    # removing a monomial from the support cannot raise the maximal order
    from mahler.cli.examples import m_system
    from mahler.auxpoly import SystemSeries

    vec = SystemSeries(m_system(), [mpq(0)]).vector(48)
    exps = sorted(exps)
    full = max_vanishing_order(vec, SupportSet(exps), 48).T0
    sub = max_vanishing_order(vec, SupportSet(exps[:-1]), 48).T0 if len(exps) > 2 else -1
    assert sub <= full
    assert full == _exhaustive_T0(vec, SupportSet(exps), 48)


def test_grid_scan_ratios_and_conventions(m_series):
    rows = grid_scan(m_series.vector(256), range(2, 5), 256)
    assert [r["ratio"] for r in rows] == [mpq(3, 4), mpq(8, 9), mpq(15, 16)]
    assert [r["min_K1"] for r in rows] == [mpq(1, 2), mpq(8, 15), mpq(15, 28)]
    assert [r["min_K1_total"] for r in rows] == [mpq(1, 4), mpq(8, 35), mpq(3, 14)]


def test_t_D():
    prof = KFunctionProfile()
    assert t_D(prof, 4) == 2 and t_D(prof, 9) == 4
    with pytest.raises(PreconditionError):
        t_D(prof, 1)


def test_bound_and_admissibility(m_series):
    br = check_multiplicity_bound(3, 1, 1, 1, 1)
    assert br.passes and br.min_K1 == mpq(1, 2)
    assert not check_multiplicity_bound(3, 1, 1, 1, mpq(1, 3)).passes
    rep = check_admissibility(m_series.vector(64), SupportSet.grid(2, 2), 1, N=64)
    assert rep.admissible and rep.ratio == mpq(3, 4)


def test_support_parse():
    assert SupportSet.parse("grid:D=2", 2).card == 4
    assert SupportSet.parse("[[0, 0], [1, 2]]", 2).card == 2
