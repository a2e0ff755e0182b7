"""Multi-modular rank profiles and kernels with CRT + rational reconstruction."""

import gmpy2
import numpy as np
from gmpy2 import mpq, mpz

from ..algebra.scalars import Q
from ..errors import NoConvergenceError
from . import _kernels
from .exact import _primitive, integer_rows

_PRIME_CACHE = []


def primes(k, start=2**31 - 2**20):
    """First k primes above ``start`` (all below 2^31)."""
    while len(_PRIME_CACHE) < k:
        prev = _PRIME_CACHE[-1] if _PRIME_CACHE else start
        _PRIME_CACHE.append(int(gmpy2.next_prime(prev)))
    return _PRIME_CACHE[:k]


def reduce_mod(rows, p):
    """Rational matrix -> int64 array mod p; None if a denominator vanishes mod p."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    out = np.zeros((m, n), dtype=np.int64)
    pz = mpz(p)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            x = Q(x)
            if not x:
                continue
            d = x.denominator % pz
            if d == 0:
                return None
            out[i, j] = int((x.numerator % pz) * gmpy2.invert(d, pz) % pz)
    return out


def rank_profile_mod(rows, p=None):
    """Pivot columns of the row echelon form mod p (the column rank profile)."""
    p = p or primes(1)[0]
    A = reduce_mod(rows, p)
    if A is None:
        return None
    _, piv, _ = _kernels.rref_mod(A, p)
    return [int(c) for c in piv]


def rational_reconstruct(a, m):
    """n/d = a mod m with |n|, d < sqrt(m/2); None if no such fraction."""
    a, m = mpz(a) % m, mpz(m)
    bound = gmpy2.isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = mpz(0), mpz(1)
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if gmpy2.gcd(s1, m) != 1:
        return None
    return mpq(r1, s1)


def _kernel_from_rref(R, pivots, n):
    pivset = set(int(c) for c in pivots)
    free = [j for j in range(n) if j not in pivset]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for k, c in enumerate(pivots):
            v[int(c)] = -int(R[k, f])
        basis.append(v)
    return free, basis


def kernel_modular(rows, max_primes=64):
    """Right kernel over Q via RREF modulo several primes.

    Pivot patterns are compared across primes; primes whose pattern differs
    from the generic one are discarded. Each reconstruction is checked by an
    exact product before it is returned.
    """
    if not rows:
        raise ValueError("empty matrix")
    n = len(rows[0])
    A_int = integer_rows(rows)
    used = []
    best = None
    modulus = mpz(1)
    residues = None
    for p in primes(max_primes):
        A = reduce_mod(A_int, p)
        R, piv, _ = _kernels.rref_mod(A, p)
        key = tuple(int(c) for c in piv)
        if best is None or len(key) > len(best) or (len(key) == len(best) and key < best):
            # new (more generic) pivot pattern: restart accumulation
            best = key
            modulus = mpz(1)
            residues = None
            used = []
        if key != best:
            continue
        free, basis = _kernel_from_rref(R, key, n)
        if residues is None:
            residues = [[mpz(x) % p for x in v] for v in basis]
            modulus = mpz(p)
        else:
            new = []
            for vr, vb in zip(residues, basis):
                new.append([gmpy2.f_mod(x + modulus * ((mpz(y) - x) * gmpy2.invert(modulus, p) % p), modulus * p) for x, y in zip(vr, vb)])
            residues = new
            modulus *= p
        used.append(p)
        if not residues:
            return [], used
        cand = _reconstruct_all(residues, modulus)
        if cand is not None and all(_is_null(A_int, v) for v in cand):
            return [_primitive(v) for v in cand], used
    raise NoConvergenceError("modular kernel did not stabilise within the prime budget")


def _reconstruct_all(residues, modulus):
    out = []
    for vr in residues:
        vec = []
        for x in vr:
            r = rational_reconstruct(x, modulus)
            if r is None:
                return None
            vec.append(r)
        out.append(vec)
    return out


def _is_null(A_int, v):
    for r in A_int:
        s = mpq(0)
        for a, b in zip(r, v):
            if a and b:
                s += a * b
        if s:
            return False
    return True
