"""Integral LLL reduction (exact integer Gram-Schmidt data, no floating point)."""

from fractions import Fraction

from gmpy2 import mpz


def _dot(u, v):
    s = mpz(0)
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def lll(basis, delta=Fraction(3, 4)):
    """LLL-reduce the rows of an integer matrix (rows linearly independent).

    Integral variant: keeps d_i = prod |b*_j|^2 (j <= i) and
    lam[i][j] = d_j * mu_ij as integers so no rationals are formed.
    Returns a new list of rows (python ints).
    """
    b = [[mpz(x) for x in row] for row in basis]
    n = len(b)
    if n <= 1:
        return [[int(x) for x in row] for row in b]
    dn, dd = mpz(delta.numerator), mpz(delta.denominator)
    d = [mpz(1)] * (n + 1)  # d[0] = 1, d[i+1] for row i
    lam = [[mpz(0)] * n for _ in range(n)]

    def gram_row(k):
        for j in range(k + 1):
            u = _dot(b[k], b[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise ValueError("LLL input rows are linearly dependent")
                d[k + 1] = u

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    gram_row(0)
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            gram_row(k)
        red(k, k - 1)
        # Lovasz: d_{k+1} d_{k-1} < (delta d_k^2 - lam^2)  -> swap
        if dd * d[k + 1] * d[k - 1] < dn * d[k] * d[k] - dd * lam[k][k - 1] ** 2:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return [[int(x) for x in row] for row in b]


def sq_norm(v):
    return sum(int(x) * int(x) for x in v)
