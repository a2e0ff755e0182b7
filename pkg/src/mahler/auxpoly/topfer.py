"""Rational-p variant of the construction, and conjugate norms over the field of y."""

from dataclasses import dataclass, field

import flint
from flint import arb
from gmpy2 import mpq

from ..algebra.algebraic import AlgebraicNumber
from ..algebra.multipoly import MultiPoly
from ..algebra.scalars import ONE, ZERO
from ..dynamics.balls import arb_json, arb_q
from ..dynamics.orbit import check_nondegenerate, iterate, orbit_bounds
from ..errors import ConditionError, PreconditionError
from ..mahler_system.system import MahlerSystem
from ..multiplicity.vanishing import KFunctionProfile, SupportSet
from .construct import AuxPolynomial, pushforward_chain, siegel_polynomial
from .verify import DoubleBoundReport, SystemSeries, log_rhs


@dataclass
class TopferReport:
    T: int
    D: int
    C1: object
    C2: object
    deg_X_within_D: bool
    value: DoubleBoundReport
    hypotheses: dict
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "T": self.T,
            "D": self.D,
            "C1": str(self.C1),
            "C2": arb_json(self.C2),
            "deg_X_within_D": self.deg_X_within_D,
            "value": self.value.to_json(),
            "hypotheses": self.hypotheses,
            "notes": self.notes,
        }


def topfer_polynomial(sys: MahlerSystem, D, T, y, C3=1, profile=None, f0=None, precision=256, ss=None):
    """R_{T,D} by the Siegel step and T cleared pushforwards, with measured C1, C2 and the value."""
    n, d, delta = sys.n, sys.d, sys.delta
    C3 = mpq(C3) if not isinstance(C3, mpq) else C3
    if delta**T < C3 * D ** (n + 1):
        raise ConditionError(f"delta^T = {delta**T} < C3 D^(n+1) = {C3 * D ** (n + 1)}")
    profile = profile or KFunctionProfile()
    ss = ss or SystemSeries(sys, f0)
    f0_vals = [s[0] for s in ss.solve(4)]
    nondeg = check_nondegenerate(sys.p, y, sys, T_max=max(T, 1), precision=precision)
    cert = orbit_bounds(sys.p, y, max(T, 1), precision)
    hyp = {
        "f_i(0) = 0": all(v == 0 for v in f0_vals),
        "orbit avoids zeros of z q a": nondeg.ok,
        "orbit decays (certificate T_s)": cert.T_s,
        "delta^T >= C3 D^(n+1)": True,
        "C3": str(C3),
    }
    sup = SupportSet.grid(D, n + 1)
    Nm = 4 * sup.card + 64
    P0 = siegel_polynomial(ss.vector(Nm), sup, profile, Nm)
    chain, consts = pushforward_chain(P0, sys, T)
    R = chain[-1]
    orbit = iterate(sys.p, y, T, precision)
    with flint.ctx.workprec(precision):
        lv = log_rhs(R, sys, orbit, P0.poly, ss, precision)
        norm = lv / (arb(D) ** (n + 1) * arb(delta) ** T)
        h = R.poly.height()
        C2 = arb_q(max(h, ONE)).log() / (D * (arb(d) ** T + D**n))
    C1 = mpq(R.deg_z, d**T * D)
    val = DoubleBoundReport(T, lv, norm, {"deg_z": R.deg_z, "deg_X": R.deg_X}, True, bool(norm < 0))
    notes = []
    if not hyp["f_i(0) = 0"]:
        notes.append("f_i(0) = 0 fails for this system; the construction does not use it, reported only")
    R.provenance.append({"step": "topfer", "C1": str(C1), "C2": arb_json(C2)})
    return R, TopferReport(T, D, C1, C2, R.deg_X <= D, val, hyp, notes)


def _companion(m):
    """Companion matrix of the monic rational polynomial m / lc(m)."""
    t = m.degree
    lc = m.lc
    C = [[ZERO] * t for _ in range(t)]
    for i in range(1, t):
        C[i][i - 1] = ONE
    for i in range(t):
        C[i][t - 1] = -m[i] / lc
    return C


def _matmul(A, B):
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(n)), ZERO) for j in range(n)] for i in range(n)]


def _det_multipoly(M, nvars):
    """Laplace expansion (t is the degree of y, so small)."""
    t = len(M)
    if t == 1:
        return M[0][0]
    total = MultiPoly.zero(nvars)
    for j in range(t):
        if M[0][j].is_zero():
            continue
        sub = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * _det_multipoly(sub, nvars)
        total = total + term if j % 2 == 0 else total - term
    return total


def conjugate_norm_polynomial(P, y: AlgebraicNumber) -> MultiPoly:
    """den(y)^{t deg_z P} prod_i P(y_i, X), computed as det P(C, X) with C the companion of y.

    The result lives in the X variables only (z exponent 0) and has integer coefficients.
    """
    poly = P.poly if isinstance(P, AuxPolynomial) else P
    if not isinstance(y, AlgebraicNumber):
        y = AlgebraicNumber.rational(y)
    m = y.minpoly
    t = m.degree
    nv = poly.nvars
    K = max(poly.deg_z(), 0)
    C = _companion(m)
    powers = [[[ONE if i == j else ZERO for j in range(t)] for i in range(t)]]
    for _ in range(K):
        powers.append(_matmul(powers[-1], C))
    M = [[MultiPoly.zero(nv) for _ in range(t)] for _ in range(t)]
    for ax, c in poly.group_X().items():
        mat = [[ZERO] * t for _ in range(t)]
        for k, ck in enumerate(c.coeffs):
            if ck:
                Pk = powers[k]
                for i in range(t):
                    for j in range(t):
                        if Pk[i][j]:
                            mat[i][j] += ck * Pk[i][j]
        mono = MultiPoly({(0,) + ax: 1}, nv)
        for i in range(t):
            for j in range(t):
                if mat[i][j]:
                    M[i][j] = M[i][j] + mono * MultiPoly.const(mat[i][j], nv)
    N = _det_multipoly(M, nv)
    out = N * MultiPoly.const(mpq(y.den()) ** (t * K), nv)
    if not out.is_integral() and poly.is_integral():
        raise PreconditionError("conjugate norm is not integral: denominator bookkeeping failed")
    return out
