"""Linear Mahler systems a(z) f(z) = A(z) f(p(z)) + B(z) and their series solutions."""

import json

from ..algebra import polymat
from ..algebra.poly import Poly, RationalFunction
from ..algebra.scalars import ONE, ZERO, Q
from ..algebra.series import TruncatedSeries, power_table
from ..errors import AmbiguousError, IllPosedError, PreconditionError
from ..linalg.exact import kernel_exact, rank_exact


def _poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (list, tuple)):
        return Poly(x)
    return Poly.const(x)


class MahlerSystem:
    """The data (a, A, B, p) with n unknown series.

    Derived: d = deg p, delta = ord_0 p, q = det A.
    """

    def __init__(self, a, A, B, p):
        self.a = _poly(a)
        self.A = [[_poly(x) for x in row] for row in A]
        self.B = [_poly(x) for x in B]
        if isinstance(p, RationalFunction):
            self.p = p
        elif isinstance(p, Poly):
            self.p = RationalFunction.from_poly(p)
        else:
            self.p = RationalFunction(_poly(p))
        n = len(self.A)
        if n == 0 or any(len(r) != n for r in self.A) or len(self.B) != n:
            raise PreconditionError("A must be n x n and B of length n")
        if self.a.is_zero():
            raise PreconditionError("a must be nonzero")
        self.n = n
        self.q = polymat.det(self.A)
        if self.q.is_zero():
            raise PreconditionError("det A must be nonzero")
        if self.p.den[0] == 0:
            raise PreconditionError("p must be regular at 0")
        o = self.p.ord0()
        if o is None or o < 2:
            raise PreconditionError(f"ord_0 p must be at least 2 (got {o})")
        self.delta = o
        self.d = self.p.degree

    @property
    def p_is_polynomial(self):
        return self.p.is_polynomial()

    def adjugate(self):
        return polymat.adjugate(self.A)

    def A0_B0(self):
        """A0 = a * adj(A) and B0 = adj(A) B: polynomial data of the inverse step.

        From a f = A f(p) + B:  q f(p) = A0 f - B0.
        """
        adj = self.adjugate()
        A0 = [[self.a * x for x in row] for row in adj]
        B0 = polymat.matvec(adj, self.B)
        return A0, B0

    def to_json(self):
        return {
            "a": self.a.to_json(),
            "A": [[x.to_json() for x in row] for row in self.A],
            "B": [x.to_json() for x in self.B],
            "p": self.p.to_json(),
        }

    @classmethod
    def from_json(cls, data):
        p = data["p"]
        if isinstance(p, dict):
            p = RationalFunction.from_json(p)
        else:
            p = RationalFunction(Poly.from_json(p))
        return cls(
            Poly.from_json(data["a"]),
            [[Poly.from_json(x) for x in row] for row in data["A"]],
            [Poly.from_json(x) for x in data["B"]],
            p,
        )

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            data = json.load(fh)
        sys = cls.from_json(data)
        f0 = data.get("f0")
        return sys, (None if f0 is None else [Q(x) for x in f0])

    def __repr__(self):
        return f"MahlerSystem(n={self.n}, d={self.d}, delta={self.delta}, q={self.q!r})"


class SeriesSolution:
    def __init__(self, system, f, N):
        self.system = system
        self.f = f
        self.residual_order = N

    def residual(self, N=None):
        """a f - A f(p) - B truncated at N, one series per row."""
        return functional_residual(self.system, self.f, N or self.residual_order)

    def check(self, N=None):
        return all(r.is_zero_mod(r.order) for r in self.residual(N))

    def to_json(self):
        return {"order": self.residual_order, "f": [s.to_json() for s in self.f]}


def functional_residual(sys, f, N):
    from ..algebra.series import series_compose_inner

    fp = [series_compose_inner(fi, sys.p, N) for fi in f]
    out = []
    for i in range(sys.n):
        r = TruncatedSeries.from_poly(sys.a, N) * f[i].truncate(N) - TruncatedSeries.from_poly(sys.B[i], N)
        for j in range(sys.n):
            r = r - TruncatedSeries.from_poly(sys.A[i][j], N) * fp[j]
        out.append(r)
    return out


def _constant_term(sys, f0):
    n = sys.n
    a0 = sys.a[0]
    M = [[(a0 if i == j else ZERO) - sys.A[i][j][0] for j in range(n)] for i in range(n)]
    b0 = [sys.B[i][0] for i in range(n)]
    rk = rank_exact(M)
    if f0 is not None:
        f0 = [Q(x) for x in f0]
        if len(f0) != n:
            raise IllPosedError("seed f(0) has the wrong length")
        lhs = [sum((M[i][j] * f0[j] for j in range(n)), ZERO) for i in range(n)]
        if lhs != b0:
            raise IllPosedError("supplied f(0) does not satisfy (a(0)I - A(0)) f(0) = B(0)")
        return f0
    if rk < n:
        aug = [M[i] + [b0[i]] for i in range(n)]
        if rank_exact(aug) > rk:
            raise IllPosedError("constant-term system is inconsistent")
        raise AmbiguousError("a(0)I - A(0) is singular; supply f(0) explicitly")
    # unique solution: kernel of [M | -b0] normalised at the last slot
    aug = [M[i] + [-b0[i]] for i in range(n)]
    ker = kernel_exact(aug)
    v = ker[0]
    scale = Q(v[-1])
    return [Q(x) / scale for x in v[:-1]]


def solve_series(sys: MahlerSystem, N: int, f0=None) -> SeriesSolution:
    """Exact coefficients of f to order N by ascending recursion in the degree.

    At degree k >= 1 the right-hand side only involves f_l with
    l <= k / delta < k, so f_k = (rhs_k - sum_{j>=1} a_j f_{k-j}) / a(0).
    """
    n = sys.n
    a = sys.a
    if a[0] == 0:
        raise IllPosedError("a(0) = 0")
    if N <= 0:
        return SeriesSolution(sys, [TruncatedSeries.zero(0) for _ in range(n)], 0)
    c0 = _constant_term(sys, f0)
    kmax = (N - 1) // sys.delta
    P = power_table(sys.p, N, kmax)
    # nonzero entries of each power, so (f o p)_m is a short sum
    f = [[ZERO] * N for _ in range(n)]
    for i in range(n):
        f[i][0] = c0[i]
    inv_a0 = ONE / a[0]
    Acoef = [[sys.A[i][j].coeffs for j in range(n)] for i in range(n)]
    Bcoef = [sys.B[i].coeffs for i in range(n)]
    acoef = a.coeffs
    # fp[j][m] = (f_j o p)_m, filled lazily as f_l become known
    fp = [[ZERO] * N for _ in range(n)]
    for j in range(n):
        for m in range(N):
            fp[j][m] = c0[j] * P[0][m]
    done_l = 0  # f_l for l <= done_l already folded into fp
    for k in range(1, N):
        # fold newly available f_l (l <= k // delta) into fp
        while done_l + 1 <= kmax and (done_l + 1) * sys.delta <= k:
            l = done_l + 1
            row = P[l]
            for j in range(n):
                fl = f[j][l]
                if fl:
                    fpj = fp[j]
                    for m in range(l * sys.delta, N):
                        if row[m]:
                            fpj[m] += fl * row[m]
            done_l = l
        for i in range(n):
            s = Bcoef[i][k] if k < len(Bcoef[i]) else ZERO
            for j in range(n):
                Aij = Acoef[i][j]
                fpj = fp[j]
                for t in range(min(len(Aij), k + 1)):
                    if Aij[t]:
                        s += Aij[t] * fpj[k - t]
            fi = f[i]
            for t in range(1, min(len(acoef), k + 1)):
                if acoef[t]:
                    s -= acoef[t] * fi[k - t]
            fi[k] = s * inv_a0
    series = [TruncatedSeries(f[i], N) for i in range(n)]
    return SeriesSolution(sys, series, N)
