"""Modular row reduction kernels: numba-compiled with a numpy fallback.

Set MAHLER_DISABLE_NUMBA=1 to force the numpy path. Entries are int64 in
[0, p) with p < 2^31, so every product fits in 63 bits.
"""

import os

import numpy as np

_DISABLED = os.environ.get("MAHLER_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False


def _inv_mod(a, p):
    return pow(int(a), -1, int(p))


def rref_mod_numpy(A, p):
    """Reduced row echelon form of A mod p. Returns (R, pivots, rank)."""
    R = np.array(A, dtype=np.int64) % p
    m, n = R.shape
    pivots = np.full(min(m, n), -1, dtype=np.int64)
    r = 0
    for c in range(n):
        if r >= m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = _inv_mod(R[r, c], p)
        R[r] = (R[r] * inv) % p
        col = R[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            R[rows] = (R[rows] - np.outer(col[rows], R[r]) % p) % p
        pivots[r] = c
        r += 1
    return R, pivots[:r], r


def _rref_mod_loops(R, p):
    m, n = R.shape
    pivots = np.full(min(m, n), -1, dtype=np.int64)
    r = 0
    for c in range(n):
        if r >= m:
            break
        piv = -1
        for i in range(r, m):
            if R[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                t = R[r, j]
                R[r, j] = R[piv, j]
                R[piv, j] = t
        # modular inverse by extended Euclid
        a = R[r, c]
        t0, t1, r0, r1 = 0, 1, p, a
        while r1 != 0:
            qq = r0 // r1
            t0, t1 = t1, t0 - qq * t1
            r0, r1 = r1, r0 - qq * r1
        inv = t0 % p
        for j in range(c, n):
            R[r, j] = (R[r, j] * inv) % p
        for i in range(m):
            if i != r:
                f = R[i, c]
                if f != 0:
                    for j in range(c, n):
                        R[i, j] = (R[i, j] - f * R[r, j]) % p
        pivots[r] = c
        r += 1
    return pivots, r


if HAVE_NUMBA:
    _rref_mod_jit = njit(cache=False)(_rref_mod_loops)

    def rref_mod_numba(A, p):
        R = np.array(A, dtype=np.int64) % p
        pivots, r = _rref_mod_jit(R, np.int64(p))
        return R, pivots[:r], r

    rref_mod = rref_mod_numba
else:
    rref_mod_numba = None
    rref_mod = rref_mod_numpy


def backend():
    return "numba" if rref_mod is not rref_mod_numpy else "numpy"
