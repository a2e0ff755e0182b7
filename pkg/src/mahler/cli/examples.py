"""Worked examples replayed end to end by ``mahler examples``."""

import flint
from flint import arb
from gmpy2 import mpq

from ..algebra.poly import Poly, RationalFunction, chebyshev, chebyshev_recurrence
from ..algebra.series import TruncatedSeries
from ..dynamics.balls import arb_json, arb_q, ball_json
from ..errors import NoConvergenceError


def m_system():
    from ..mahler_system.system import MahlerSystem

    return MahlerSystem(Poly.const(1), [[Poly.const(1)]], [Poly.x()], RationalFunction(Poly([0, 0, 1])))


def _row(example, check, ok, value):
    return {"example": example, "check": check, "ok": bool(ok), "value": str(value)}


def run_m(prec):
    from ..auxpoly.construct import pushforward_chain, siegel_polynomial
    from ..auxpoly.verify import SystemSeries, verify_identity
    from ..mahler_system.system import solve_series
    from ..multiplicity.vanishing import SupportSet, max_vanishing_order

    sys_ = m_system()
    N = 64
    sol = solve_series(sys_, N, [mpq(0)])
    c = sol.f[0].coefficients(N)
    pow2 = {1 << k for k in range(7)}
    ok_coeffs = all(c[i] == (1 if i in pow2 else 0) for i in range(N))
    rows = [_row("m", "coefficients are 1 exactly at 2^k (k < 64)", ok_coeffs and sol.check(), f"order {N}")]

    ss = SystemSeries(sys_, [mpq(0)])
    vec = ss.vector(16)
    res = max_vanishing_order(vec, SupportSet.grid(2, 2), 16)
    rows.append(_row("m", "T0 on the 2x2 grid for (z, M)", res.T0 == 3, f"T0 = {res.T0}, witness {res.witness}"))

    sup = SupportSet.grid(2, 2)
    Nm = 4 * sup.card + 64
    P0 = siegel_polynomial(ss.vector(Nm), sup, None, Nm)
    chain, _ = pushforward_chain(P0, sys_, 3)
    reps = [verify_identity(P, sys_, mpq(1, 2), P0.poly, ss, prec) for P in chain]
    rows.append(_row("m", "pushforward identity at y = 1/2, T = 0..3", all(r.holds for r in reps), f"{len(reps)} cases"))
    return rows, {"series": sol.to_json(), "vanishing": res.to_json(), "identity": [r.to_json() for r in reps]}


def run_chebyshev(prec):
    from ..mahler_system.families import chebyshev_commutation_table, chebyshev_tau_numeric

    table = chebyshev_commutation_table(8)
    closed = all(chebyshev(k) == chebyshev_recurrence(k) for k in range(1, 9))
    rows = [
        _row("chebyshev", "T_m(T_n) = T_n(T_m) for 1 <= m, n <= 8", all(table.values()), f"{sum(table.values())}/64"),
        _row("chebyshev", "closed form agrees with the recurrence, n <= 8", closed, "exact"),
    ]
    setup = {"p": "T_2 = 2z^2 - 1", "series": "tau(y) = sum_{k>=1} T_2^[k](y)", "y": "1/3", "precision": prec}
    try:
        chebyshev_tau_numeric(mpq(1, 3), prec=prec, kmax=16)
        setup["outcome"] = "converged"
        diverges = False
    except NoConvergenceError as e:
        with flint.ctx.workprec(prec):
            setup["orbit"] = [ball_json(b) for b in getattr(e, "orbit", [])[:6]]
        setup["outcome"] = f"NoConvergenceError: {e}"
        diverges = True
    print("tau setup: p = T_2, y = 1/3, terms T_2^[k](y), k >= 1")
    print(f"  {setup['outcome']}")
    rows.append(_row("chebyshev", "tau iterates detected as non-decaying", diverges, "NoConvergenceError" if diverges else "converged"))
    return rows, {"commutation": {f"{m},{n}": v for (m, n), v in table.items()}, "tau_setup": setup}


def cantor_value(y, prec):
    """theta(y) = sum_h 1 / prod_{i<=h} q(y^(2^i)) for q = z + 2 and 0 <= y < 1, as a ball."""
    with flint.ctx.workprec(prec + 32):
        x = arb_q(y)
        acc, prod, w = arb(0), arb(1), x
        h = 0
        while True:
            prod = prod * (w + 2)
            acc += 1 / prod
            w = w * w
            h += 1
            # later factors are >= 2, so the tail is at most 1/prod
            tail = 1 / prod
            if tail < arb(2) ** (-prec - 8):
                break
        return acc + arb(0, tail.mid() + tail.rad())


def run_cantor(prec):
    from ..mahler_system.families import cantor_residual, cantor_series, cantor_system
    from ..mahler_system.system import solve_series

    p = Poly([0, 0, 1])
    q = Poly([2, 1])
    N = 256
    theta, terms = cantor_series(p, q, N, return_terms=True)
    res = cantor_residual(theta, p, q, N)
    sol = solve_series(cantor_system(p, q), N)
    agree = sol.f[0].coefficients(N) == theta.coefficients(N)
    val = cantor_value(mpq(1, 3), prec)
    rows = [
        _row("cantor", "q theta - 1 - theta(p) = 0 mod z^256", res.is_zero_mod(N), f"{terms} factors"),
        _row("cantor", "closed form agrees with the recursive solver", agree, f"order {N}"),
        _row("cantor", "theta(1/3) enclosure", True, val.str(20, radius=False)),
    ]
    with flint.ctx.workprec(prec):
        vj = arb_json(val)
    return rows, {"theta_head": [str(x) for x in theta.coefficients(16)], "theta_at_1_3": vj}


RUNNERS = {"m": run_m, "chebyshev": run_chebyshev, "cantor": run_cantor}

__all__ = ["RUNNERS", "TruncatedSeries", "cantor_value", "m_system"]
