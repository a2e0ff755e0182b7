"""Truncated power series with exact rational coefficients."""

from ..errors import CompositionOrderError, TruncationError
from .poly import Poly, RationalFunction
from .scalars import ONE, ZERO, Q, qstr


def _mul_trunc(a, b, n):
    """First n coefficients of the product of coefficient lists a and b."""
    if len(a) > len(b):
        a, b = b, a
    out = [ZERO] * n
    nb = len(b)
    for i, ai in enumerate(a):
        if i >= n:
            break
        if not ai:
            continue
        for j in range(min(nb, n - i)):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


class TruncatedSeries:
    """Power series sum c_k z^k known for k < order.

    With ``exact=True`` the series is a polynomial: every coefficient is known
    and ``order`` is just the stored length.
    """

    __slots__ = ("coeffs", "order", "exact")

    def __init__(self, coeffs, order=None, exact=False):
        c = [Q(x) for x in coeffs]
        if exact:
            while c and c[-1] == 0:
                c.pop()
            order = len(c)
        else:
            if order is None:
                order = len(c)
            if len(c) > order:
                c = c[:order]
            c += [ZERO] * (order - len(c))
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "order", int(order))
        object.__setattr__(self, "exact", bool(exact))

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @classmethod
    def _raw(cls, coeffs, order, exact=False):
        obj = object.__new__(cls)
        if exact:
            coeffs = list(coeffs)
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
            order = len(coeffs)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "exact", exact)
        return obj

    @classmethod
    def from_poly(cls, p: Poly, order=None):
        if order is None:
            return cls._raw(p.coeffs, len(p.coeffs), exact=True)
        c = list(p.coeffs[:order]) + [ZERO] * max(0, order - len(p.coeffs))
        return cls._raw(c, order)

    @classmethod
    def identity(cls):
        return cls._raw([ZERO, ONE], 2, exact=True)

    @classmethod
    def zero(cls, order):
        return cls._raw([ZERO] * order, order)

    def known(self):
        """Number of coefficients that can be queried (inf for exact series)."""
        return float("inf") if self.exact else self.order

    def __getitem__(self, k):
        if k < 0:
            raise IndexError(k)
        if k < len(self.coeffs):
            return self.coeffs[k]
        if self.exact:
            return ZERO
        raise TruncationError(f"coefficient {k} requested but series is known only to order {self.order}")

    def coefficients(self, n):
        """First n coefficients as a list."""
        return [self[k] for k in range(n)]

    def truncate(self, n):
        if self.exact:
            c = list(self.coeffs[:n]) + [ZERO] * max(0, n - len(self.coeffs))
            return TruncatedSeries._raw(c, n)
        if n > self.order:
            raise TruncationError(f"cannot extend order {self.order} to {n}")
        return TruncatedSeries._raw(self.coeffs[:n], n)

    def ord0(self):
        """Index of the first nonzero coefficient, or None if all known ones vanish."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def is_zero_mod(self, n):
        return all(self[k] == 0 for k in range(n))

    def __repr__(self):
        tag = "exact" if self.exact else f"O(z^{self.order})"
        shown = ", ".join(qstr(c) for c in self.coeffs[:8])
        more = ", ..." if len(self.coeffs) > 8 else ""
        return f"TruncatedSeries([{shown}{more}], {tag})"

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.exact == other.exact and self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.order, self.exact))

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, Poly):
            return TruncatedSeries.from_poly(other)
        return TruncatedSeries._raw([Q(other)], 1, exact=True)

    @staticmethod
    def _target(a, b):
        if a.exact and b.exact:
            return None
        if a.exact:
            return b.order
        if b.exact:
            return a.order
        return min(a.order, b.order)

    def __add__(self, other):
        other = self._coerce(other)
        n = self._target(self, other)
        if n is None:
            m = max(len(self.coeffs), len(other.coeffs))
            return TruncatedSeries._raw([self[k] + other[k] for k in range(m)], m, exact=True)
        return TruncatedSeries._raw([self[k] + other[k] for k in range(n)], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw([-c for c in self.coeffs], self.order, self.exact)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (TruncatedSeries, Poly)):
            c = Q(other)
            return TruncatedSeries._raw([c * x for x in self.coeffs], self.order, self.exact)
        other = self._coerce(other)
        n = self._target(self, other)
        if n is None:
            m = len(self.coeffs) + len(other.coeffs) - 1
            if m <= 0:
                return TruncatedSeries._raw([], 0, exact=True)
            return TruncatedSeries._raw(_mul_trunc(self.coeffs, other.coeffs, m), m, exact=True)
        return TruncatedSeries._raw(_mul_trunc(self.coeffs, other.coeffs, n), n)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = TruncatedSeries._raw([ONE], 1, exact=True)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self, order=None):
        """Multiplicative inverse; requires a nonzero constant term."""
        if order is None and self.exact:
            raise ValueError("inverse of an exact series needs an explicit order")
        n = self.order if order is None else order
        if not self.exact and n > self.order:
            raise TruncationError("inverse needs more known coefficients")
        c0 = self[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = ONE / c0
        out = [ZERO] * n
        if n:
            out[0] = inv0
        src = self.coeffs
        for k in range(1, n):
            s = ZERO
            for j in range(1, min(k, len(src) - 1) + 1):
                if src[j]:
                    s += src[j] * out[k - j]
            out[k] = -s * inv0
        return TruncatedSeries._raw(out, n)

    def shift(self, k):
        """Multiply by z^k (the known order grows by k)."""
        c = [ZERO] * k + list(self.coeffs)
        if self.exact:
            return TruncatedSeries._raw(c, len(c), exact=True)
        return TruncatedSeries._raw(c, self.order + k)

    def to_poly(self):
        return Poly(self.coeffs)

    def to_json(self):
        return {"coeffs": [qstr(c) for c in self.coeffs], "order": self.order, "exact": self.exact}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, list):
            return cls([Q(c) for c in data])
        return cls([Q(c) for c in data["coeffs"]], data.get("order"), data.get("exact", False))


def rational_series(p, N):
    """Power series of a RationalFunction (or Poly) at 0, to order N."""
    if isinstance(p, TruncatedSeries):
        return p.truncate(N)
    if isinstance(p, Poly):
        return TruncatedSeries.from_poly(p, N)
    if p.den[0] == 0:
        raise CompositionOrderError("rational function has a pole at 0")
    num = TruncatedSeries.from_poly(p.num, N)
    if p.is_polynomial():
        return num * (ONE / p.den[0])
    return num * TruncatedSeries.from_poly(p.den, N).inverse(N)


def _order_of(p):
    o = p.ord0()
    if o is None:
        raise CompositionOrderError("inner function is identically zero")
    return o


def series_compose_inner(f: TruncatedSeries, p, N: int) -> TruncatedSeries:
    """Coefficients of f(p(z)) below z^N.

    Only f_k with k*ord0(p) < N contribute, so f must be known to
    order ceil(N / ord0(p)).
    """
    if isinstance(p, Poly):
        p = RationalFunction.from_poly(p)
    if isinstance(p, TruncatedSeries):
        delta = p.ord0()
        if delta is None:
            delta = N if p.exact else p.order
    else:
        delta = _order_of(p)
    if delta <= 0:
        raise CompositionOrderError(f"inner function must vanish at 0 (ord0 = {delta})")
    need = -(-N // delta)
    if not f.exact and f.order < need:
        raise TruncationError(f"f known to order {f.order}, need {need} for N={N}, ord0(p)={delta}")
    if isinstance(p, TruncatedSeries):
        ps = p.truncate(N).coeffs
    else:
        ps = rational_series(p, N).coeffs
    kmax = min(need, len(f.coeffs)) - 1
    # Horner in the truncated ring, tracking the vanishing order to skip work
    acc = [ZERO] * N
    for k in range(kmax, -1, -1):
        if any(acc):
            acc = _mul_trunc(ps, acc, N)
        if f.coeffs[k] and N:
            acc[0] += f.coeffs[k]
    return TruncatedSeries._raw(acc, N)


def power_table(p, N, kmax):
    """Series p^0, p^1, ..., p^kmax truncated at N (as coefficient lists)."""
    ps = rational_series(p, N).coeffs
    out = [[ONE] + [ZERO] * (N - 1) if N else []]
    for _ in range(kmax):
        out.append(_mul_trunc(out[-1], ps, N))
    return out
