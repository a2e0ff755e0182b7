import math

import flint
import pytest
import sympy as sp
from flint import acb, arb
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from mahler.errors import NotAdmissibleError, PrecisionExhausted, PreconditionError
from mahler.measure import (
    CriterionParams,
    VarietyStats,
    criterion_check,
    criterion_params_from_selection,
    dirichlet_report,
    exponent_ia1,
    exponent_ia2,
    exponent_thm2,
    lll_small_value_probe,
    log_ratio,
    m_at,
    parameter_selection,
    trdeg_bounds,
)

# symbolic oracle: the displayed exponents with r = log d / log delta
n_, k_, r_, e_ = sp.symbols("n k r epsilon")
SYMBOLIC = {
    "ia1": {
        "outer": (n_ + 1) / (n_ - k_) - (k_ + 1) / ((n_ - k_) * r_),
        "theta_inner": (n_ + 1 - k_ + e_) / (n_ + 1 - k_ - r_),
        "dW_exp": (k_ + 1) / ((n_ - k_) * r_),
        "bound": n_ + 1 - r_,
    },
    "ia2": {
        "outer": 2 * (n_ + 1) / (n_ - k_) - (k_ + 1) / ((n_ - k_) * r_),
        "theta_inner": (n_ + 1 - k_ - r_ + e_) / (n_ + 1 - k_ - 2 * r_),
        "dW_exp": (k_ + 1) / ((n_ - k_) * r_) - (n_ + 1) / (n_ - k_),
        "bound": n_ + 1 - 2 * r_,
    },
    "thm2": {
        "outer": (n_ + 1) / (n_ - k_) - (k_ + 1) / ((n_ - k_) * r_),
        "theta_inner": 1 / (1 - r_ * (n_ + 1) / (2 * n_ - k_ + 1)),
        "dW_exp": (k_ + 1) / (n_ - k_),
        "bound": 2 * n_ + 1 - r_ * (n_ + 1),
    },
}
CALC = {"ia1": exponent_ia1, "ia2": exponent_ia2, "thm2": exponent_thm2}


def _sym(th, field, n, k, r, eps=0):
    v = SYMBOLIC[th][field].subs({n_: n, k_: k, r_: sp.Rational(int(r.numerator), int(r.denominator)), e_: eps})
    return mpq(int(sp.numer(v)), int(sp.denom(v)))


def test_worked_examples():
    e = exponent_ia1(1, 0, 2, 2)
    assert (e.admissible, e.outer, e.theta_inner, e.dW_exp) == (True, 1, 2, 1)
    e = exponent_ia1(3, 0, 4, 2)
    assert (e.outer, e.dW_exp) == (mpq(7, 6), mpq(1, 6))
    assert not exponent_ia1(1, 1, 3, 3).admissible
    e = exponent_ia2(2, 0, 2, 2)
    assert (e.outer, e.dW_exp, e.theta_inner) == (mpq(5, 2), -1, 2)
    assert not exponent_ia2(1, 0, 5, 5).admissible
    assert exponent_ia2(4, 1, 2, 2).outer == mpq(8, 3)
    e = exponent_thm2(1, 0, 2, 2)
    assert (e.theta_inner, e.outer, e.dW_exp) == (3, 1, 1)
    assert exponent_thm2(2, 0, 3, 3).theta_inner == mpq(5, 2)
    assert not any(exponent_thm2(2, k, 8, 2).admissible for k in range(2))


@pytest.mark.parametrize("th", ["ia1", "ia2", "thm2"])
@pytest.mark.parametrize("d,delta", [(2, 2), (4, 2), (8, 4), (9, 3), (27, 9), (3, 3)])
def test_symbolic_agreement(th, d, delta):
    r = log_ratio(d, delta)
    assert isinstance(r, type(mpq(1)))
    for n in range(1, 7):
        for k in range(n):
            e = CALC[th](n, k, d, delta)
            assert e.admissible == (k < _sym(th, "bound", n, k, r))
            if e.admissible:
                for f in ("outer", "theta_inner", "dW_exp"):
                    assert getattr(e, f) == _sym(th, f, n, k, r), (th, n, k, f)


def test_eps_enters_theta():
    e = exponent_ia1(1, 0, 2, 2, eps=mpq(1, 100))
    assert e.theta_inner == mpq(201, 100)


def test_irrational_ratio_is_a_ball():
    e = exponent_ia1(3, 0, 3, 2)
    assert not e.exact
    with flint.ctx.workprec(256):
        want = 4 / arb(3) - arb(2).log() / arb(3).log() / 3
        assert e.outer.overlaps(want)


@pytest.mark.parametrize("n", range(1, 11))
def test_dirichlet(n):
    rep = dirichlet_report(n, 5, 5)
    assert rep.clean_regime and rep.theta_inner == n + 2
    assert rep.outer == 1 and rep.dW_exp == n


def test_dirichlet_forms():
    assert dirichlet_report(1, 2, 2).U_formula == "C * (h + d^(3))^(1) * d^(1)"
    assert not dirichlet_report(2, 4, 2).admissible
    with pytest.raises(NotAdmissibleError):
        dirichlet_report(2, 4, 2, strict=True)


def test_trdeg():
    for n in range(1, 6):
        r = trdeg_bounds(n, 3, 3)
        assert (r.trdeg_f, r.trdeg_yf) == (n, n - 1)
        assert r.full_condition and r.near_full_condition
        r = trdeg_bounds(n, 9, 3)
        assert r.trdeg_f == n - 1 and not r.full_condition


def test_thm2_condition_vs_ia1():
    # for d >= delta the rational-p dimension bound 2n+1-r(n+1) never exceeds n+1-r
    for n in range(1, 7):
        for d, delta in [(2, 2), (4, 2), (3, 2), (5, 3), (9, 4)]:
            for k in range(n):
                if exponent_thm2(n, k, d, delta).admissible:
                    assert exponent_ia1(n, k, d, delta).admissible
                a, b = exponent_ia1(n, k, d, delta), exponent_thm2(n, k, d, delta)
                if a.admissible and b.admissible and a.exact:
                    assert a.outer == b.outer


def test_parameter_selection_example():
    pc = parameter_selection("ia1", VarietyStats(0, 1, 1), 1, 2, 2)  # c defaults to e
    assert pc.theta == 1 and pc.T == 3
    assert abs(float(pc.T_real.mid()) - 2 / math.log(2)) < 1e-12
    assert abs(float(pc.D_prime.mid()) - math.e) < 1e-12
    assert pc.condition_holds is False  # recorded, see the report details


def test_parameter_selection_h_dominates():
    # d = delta: the D' exponent on theta vanishes, so D' does not move with h
    a = parameter_selection("ia1", VarietyStats(0, 1, 10), 1, 2, 2)
    b = parameter_selection("ia1", VarietyStats(0, 1, 10**6), 1, 2, 2)
    assert b.theta == 10**6
    assert abs(float(a.D_prime.mid()) - float(b.D_prime.mid())) < 1e-12
    with pytest.raises(NotAdmissibleError):
        parameter_selection("ia2", VarietyStats(0, 1, 1), 1, 2, 2)


def test_parameter_selection_thm2_condition():
    pc = parameter_selection("thm2", VarietyStats(0, 1, 1), 1, 2, 2)
    assert pc.condition_holds is True
    pc = parameter_selection("thm2", VarietyStats(0, 1, 1), 1, 2, 2, C3=10**6)
    assert pc.condition_holds is False


def test_criterion_examples():
    # floor 4 (k+1) log(d1 d2 (1 + m^2)) = 4 log 5 at k = 0, m = 2
    tau = mpq(int(4 * math.log(5) * 10**6) + 1, 10**6)
    p = CriterionParams(2, 1, tau, 10**9, [1, 1])
    rep = criterion_check(p, VarietyStats(0, 1, mpq(1, 10**6)), 2)
    assert rep.passes
    rep = criterion_check(CriterionParams(2, 1, tau, tau, [1, 1]), VarietyStats(0, 1, 1), 2)
    assert rep.U_gt_tau is False and not rep.passes
    with pytest.raises(PreconditionError):
        CriterionParams(mpq(1, 2), 1, 1, 2, [1])
    with pytest.raises(PreconditionError):
        CriterionParams(2, 1, 1, 2, [1, 2])


def test_criterion_from_selection():
    pc = parameter_selection("ia1", VarietyStats(0, 1, 1), 1, 2, 2)
    params = criterion_params_from_selection(pc, 1, 2, 2, 1, 1, 1)
    rep = criterion_check(params, VarietyStats(0, 1, 1), 1)
    assert rep.main_holds in (True, False)
    assert set(rep.to_json()) >= {"lhs", "rhs", "tau_floor", "passes"}


def test_m_at_half():
    with flint.ctx.workprec(200):
        v = m_at(mpq(1, 2), 200)
        s = sum(mpq(1, 2 ** (2**k)) for k in range(9))  # next term is 2^-512
        ref = arb(int(s.numerator)) / int(s.denominator)
        assert abs(v.real - ref) < arb(2) ** -190
        assert v.imag == 0


def test_probe_exact_point():
    rep = lll_small_value_probe([mpq(1, 2)], 1, 10)
    assert rep.exact_vanishing == ["2*X1 - 1"]


def test_probe_precision_exhausted():
    x = acb(arb(0.5, 1e-3))
    with pytest.raises(PrecisionExhausted):
        lll_small_value_probe([x], 1, 10, precision=64)


def test_probe_m_half_small():
    with flint.ctx.workprec(320):
        v = m_at(mpq(1, 2), 320)
    rep = lll_small_value_probe([v], 3, 2**16, precision=256)
    assert rep.sound and rep.consistent and not rep.exact_vanishing
    for c in rep.cells:
        if c.log_abs is not None:
            assert c.log_abs.upper() >= c.log_lower.lower()
