"""Small matrices of polynomials: determinant and adjugate without division."""

from functools import lru_cache

from .poly import Poly


def _as_poly(x):
    return x if isinstance(x, Poly) else Poly.const(x)


def det(M):
    """Determinant by Laplace expansion with memoised minors (n is small)."""
    M = [[_as_poly(x) for x in row] for row in M]
    n = len(M)
    if n == 0:
        return Poly.const(1)

    @lru_cache(maxsize=None)
    def minor(rows, cols):
        if len(rows) == 1:
            return M[rows[0]][cols[0]]
        r0 = rows[0]
        rest = rows[1:]
        total = Poly()
        for k, c in enumerate(cols):
            if M[r0][c].is_zero():
                continue
            sub = minor(rest, cols[:k] + cols[k + 1 :])
            term = M[r0][c] * sub
            total = total + term if k % 2 == 0 else total - term
        return total

    return minor(tuple(range(n)), tuple(range(n)))


def adjugate(M):
    """adj(M) with adj(M) M = M adj(M) = det(M) I."""
    M = [[_as_poly(x) for x in row] for row in M]
    n = len(M)
    if n == 1:
        return [[Poly.const(1)]]
    out = [[Poly()] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [[M[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = det(sub)
            out[j][i] = cof if (i + j) % 2 == 0 else -cof
    return out


def matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum((A[i][t] * B[t][j] for t in range(k)), Poly()) for j in range(m)] for i in range(n)]


def matvec(A, v):
    return [sum((A[i][t] * v[t] for t in range(len(v))), Poly()) for i in range(len(A))]


def evaluate(M, x):
    return [[e(x) for e in row] for row in M]


def max_length(M):
    return max(e.length() for row in M for e in row)


def max_degree(M):
    return max(e.degree for row in M for e in row)
