"""Fraction-free (Bareiss) elimination over Z and exact kernels over Q."""

import gmpy2
from gmpy2 import mpq, mpz

from ..algebra.scalars import Q


def integer_rows(rows):
    """Scale each row of a rational matrix by its denominator lcm (row space unchanged)."""
    out = []
    for r in rows:
        qs = [Q(x) for x in r]
        den = mpz(1)
        for x in qs:
            den = gmpy2.lcm(den, x.denominator)
        out.append([(x * den).numerator for x in qs])
    return out


def integer_columns(rows):
    """Scale each column by its denominator lcm (left kernel unchanged)."""
    if not rows:
        return []
    ncols = len(rows[0])
    qs = [[Q(x) for x in r] for r in rows]
    scale = []
    for j in range(ncols):
        den = mpz(1)
        for r in qs:
            den = gmpy2.lcm(den, r[j].denominator)
        scale.append(den)
    return [[(r[j] * scale[j]).numerator for j in range(ncols)] for r in qs]


def bareiss(rows):
    """Fraction-free row echelon form of an integer matrix.

    Returns (echelon rows, pivot columns). Every entry stays an integer; the
    division by the previous pivot is exact (Sylvester's identity).
    """
    A = [[mpz(x) for x in r] for r in rows]
    m = len(A)
    if m == 0:
        return [], []
    n = len(A[0])
    pivots = []
    prev = mpz(1)
    r = 0
    for c in range(n):
        if r >= m:
            break
        piv = None
        for i in range(r, m):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
        a_rc = A[r][c]
        rowr = A[r]
        for i in range(r + 1, m):
            rowi = A[i]
            a_ic = rowi[c]
            for j in range(c + 1, n):
                rowi[j] = (a_rc * rowi[j] - a_ic * rowr[j]) // prev
            rowi[c] = mpz(0)
        # columns left of c in rows below r are already zero
        prev = a_rc
        pivots.append(c)
        r += 1
    return A, pivots


def rank_exact(rows):
    if not rows:
        return 0
    return len(bareiss(integer_rows(rows))[1])


def _primitive(vec):
    den = mpz(1)
    for x in vec:
        den = gmpy2.lcm(den, x.denominator)
    ints = [(x * den).numerator for x in vec]
    g = mpz(0)
    for x in ints:
        g = gmpy2.gcd(g, x)
    if g == 0:
        return [0] * len(vec)
    ints = [x // g for x in ints]
    for x in ints:
        if x:
            if x < 0:
                ints = [-y for y in ints]
            break
    return [int(x) for x in ints]


def kernel_exact(rows, ncols=None):
    """Basis of the right kernel {v : A v = 0} over Q as primitive integer vectors.

    One basis vector per free column, normalised so its free coordinate is
    the only nonzero free coordinate.
    """
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    n = len(rows[0])
    E, pivots = bareiss(integer_rows(rows))
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    basis = []
    for f in free:
        v = [mpq(0)] * n
        v[f] = mpq(1)
        for k in range(len(pivots) - 1, -1, -1):
            c = pivots[k]
            row = E[k]
            s = mpq(0)
            for j in range(c + 1, n):
                if row[j] and v[j]:
                    s += row[j] * v[j]
            v[c] = -s / row[c]
        basis.append(_primitive(v))
    return basis


def left_kernel_exact(rows):
    """Basis of {c : c A = 0}."""
    if not rows:
        return []
    m, n = len(rows), len(rows[0])
    At = [[rows[i][j] for i in range(m)] for j in range(n)]
    if n == 0:
        return [[1 if i == j else 0 for i in range(m)] for j in range(m)]
    return kernel_exact(At)


def mat_vec(rows, v):
    return [sum((Q(a) * b for a, b in zip(r, v)), mpq(0)) for r in rows]
