"""Dense univariate polynomials and rational functions over Q."""

from math import factorial

import gmpy2

from .scalars import ONE, ZERO, Q, qstr


def _strip(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n]


def _mul_lists(a, b):
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] += ai * bj
    return out


class Poly:
    """Polynomial with exact rational coefficients in ascending degree.

    Instances are immutable; the zero polynomial has degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        object.__setattr__(self, "coeffs", tuple(_strip([Q(c) for c in coeffs])))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def _raw(cls, coeffs):
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", tuple(_strip(list(coeffs))))
        return obj

    @classmethod
    def x(cls):
        return cls._raw([ZERO, ONE])

    @classmethod
    def monomial(cls, k, c=1):
        return cls._raw([ZERO] * k + [Q(c)])

    @classmethod
    def const(cls, c):
        return cls._raw([Q(c)])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else ZERO

    def ord0(self):
        """Order of vanishing at 0 (``None`` for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == Poly.const(other).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(qstr(c) + ("" if i == 0 else f"*x^{i}"))
        return "Poly(" + " + ".join(terms) + ")"

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        return Poly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Poly):
            return Poly._raw(_mul_lists(self.coeffs, other.coeffs))
        c = Q(other)
        return Poly._raw([c * a for a in self.coeffs])

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result, base = Poly.const(1), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __call__(self, x):
        """Horner evaluation; ``x`` may be a rational, a Poly or anything with +,*."""
        if isinstance(x, Poly):
            return poly_compose(self, x)
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return ZERO if acc is None else acc

    def shift(self, k):
        """Multiply by x^k."""
        if not self.coeffs:
            return self
        return Poly._raw([ZERO] * k + list(self.coeffs))

    def truncate(self, n):
        return Poly._raw(self.coeffs[:n])

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = other.degree
        inv_lc = ONE / other.lc
        if len(r) - 1 < dq:
            return Poly(), self
        quo = [ZERO] * (len(r) - dq)
        for k in range(len(r) - 1 - dq, -1, -1):
            c = r[k + dq] * inv_lc
            quo[k] = c
            if c:
                for j, oc in enumerate(other.coeffs):
                    r[k + j] -= c * oc
        return Poly._raw(quo), Poly._raw(r[:dq])

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def monic(self):
        if not self.coeffs:
            return self
        return self * (ONE / self.lc)

    def content(self):
        """Positive rational c with self/c a primitive integer polynomial."""
        if not self.coeffs:
            return ONE
        den = gmpy2.mpz(1)
        for c in self.coeffs:
            den = gmpy2.lcm(den, c.denominator)
        num = gmpy2.mpz(0)
        for c in self.coeffs:
            num = gmpy2.gcd(num, (c * den).numerator)
        return gmpy2.mpq(num, den)

    def primitive(self):
        """Primitive integer polynomial with positive leading coefficient."""
        if not self.coeffs:
            return self
        p = self * (ONE / self.content())
        return -p if p.lc < 0 else p

    def derivative(self):
        return Poly._raw([i * c for i, c in enumerate(self.coeffs)][1:])

    def length(self):
        """Sum of absolute values of the coefficients."""
        return sum((abs(c) for c in self.coeffs), ZERO)

    def height(self):
        return max((abs(c) for c in self.coeffs), default=ZERO)

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coeffs)

    def to_json(self):
        return [qstr(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data):
        if isinstance(data, (str, int)):
            return cls.const(Q(data))
        return cls(Q(c) for c in data)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_compose(f: Poly, g: Poly) -> Poly:
    """Return f(g(x)) exactly, by Horner's scheme over Q[x]."""
    acc = Poly()
    for c in reversed(f.coeffs):
        acc = acc * g + c
    return acc


def poly_iterate(f: Poly, k: int) -> Poly:
    """k-fold composition f∘…∘f (identity for k = 0)."""
    out = Poly.x()
    for _ in range(k):
        out = poly_compose(f, out)
    return out


def chebyshev(n: int) -> Poly:
    """Chebyshev polynomial T_n from its expansion in powers of (1 - x).

    T_n = n * sum_{k=0}^{n} (-2)^k (n+k-1)! / ((n-k)! (2k)!) * (1-x)^k, n >= 1.
    """
    if n < 1:
        raise ValueError("chebyshev(n) requires n >= 1")
    one_minus_x = Poly([1, -1])
    total = Poly()
    power = Poly.const(1)
    for k in range(n + 1):
        coef = gmpy2.mpq(n * (-2) ** k * factorial(n + k - 1), factorial(n - k) * factorial(2 * k))
        total = total + power * coef
        power = power * one_minus_x
    return total


def chebyshev_recurrence(n: int) -> Poly:
    """T_n via T_{k+1} = 2x T_k - T_{k-1}; kept separate as a cross-check."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    prev, cur = Poly.const(1), Poly.x()
    if n == 0:
        return prev
    two_x = Poly([0, 2])
    for _ in range(n - 1):
        prev, cur = cur, two_x * cur - prev
    return cur


class RationalFunction:
    """Reduced quotient num/den of polynomials; den is monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly(num) if isinstance(num, (list, tuple)) else Poly.const(num)
        if den is None:
            den = Poly.const(1)
        elif not isinstance(den, Poly):
            den = Poly(den) if isinstance(den, (list, tuple)) else Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        if not num.is_zero() and g.degree > 0:
            num, den = num // g, den // g
        if num.is_zero():
            den = Poly.const(1)
        s = ONE / den.lc
        object.__setattr__(self, "num", num * s)
        object.__setattr__(self, "den", den * s)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def from_poly(cls, p: Poly):
        return cls(p, Poly.const(1))

    @property
    def degree(self) -> int:
        """max(deg num, deg den)."""
        return max(self.num.degree, self.den.degree)

    def ord0(self):
        if self.num.is_zero():
            return None
        return self.num.ord0() - self.den.ord0()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_polynomial():
            return f"RationalFunction({self.num!r})"
        return f"RationalFunction({self.num!r} / {self.den!r})"

    def __call__(self, x):
        d = self.den(x)
        if isinstance(d, type(ONE)) and d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(x) / d

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, dict):
            return cls(Poly.from_json(data["num"]), Poly.from_json(data.get("den", ["1"])))
        return cls(Poly.from_json(data))
