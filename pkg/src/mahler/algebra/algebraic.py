"""Algebraic numbers: integer minimal polynomial plus an isolating ball."""

import flint
import gmpy2
from flint import acb, fmpz, fmpz_poly

from ..errors import PreconditionError
from .poly import Poly
from .scalars import ONE, ZERO, Q


def _to_fmpz_poly(p: Poly):
    prim = p.primitive()
    return fmpz_poly([int(c) for c in prim.coeffs])


def _divisors(n):
    n = abs(int(n))
    out = [1]
    for prime, e in fmpz(n).factor():
        prime = int(prime)
        out = [d * prime**k for d in out for k in range(e + 1)]
    return sorted(out)


class AlgebraicNumber:
    """A root of an irreducible integer polynomial, selected by index.

    Roots are sorted by midpoint (real part, then imaginary part); the
    selected root is re-isolated at whatever precision is requested.
    """

    def __init__(self, minimal_polynomial, index=0, near=None):
        p = minimal_polynomial if isinstance(minimal_polynomial, Poly) else Poly(minimal_polynomial)
        if p.degree < 1:
            raise PreconditionError("minimal polynomial must have degree >= 1")
        p = p.primitive()
        fp = _to_fmpz_poly(p)
        fac = fp.factor()[1]
        if len(fac) != 1 or fac[0][1] != 1:
            raise PreconditionError(f"{p} is not irreducible over Q")
        self.minpoly = p
        self._fp = fp
        roots = self._roots(64)
        if near is not None:
            target = acb(near) if not isinstance(near, acb) else near
            index = min(range(len(roots)), key=lambda i: float(abs(roots[i] - target).mid()))
        if not 0 <= index < len(roots):
            raise PreconditionError("root index out of range")
        self.index = index

    @classmethod
    def rational(cls, x):
        x = Q(x)
        return cls(Poly([-x.numerator, x.denominator]))

    @classmethod
    def from_minpoly_near(cls, coeffs, approx):
        return cls(Poly(coeffs), near=approx)

    def _roots(self, prec):
        with flint.ctx.workprec(prec):
            roots = [r for r, _ in self._fp.complex_roots()]
        # canonical order: by real part then imaginary part (midpoints)
        roots.sort(key=lambda r: (float(r.real.mid()), float(r.imag.mid())))
        return roots

    @property
    def degree(self):
        return self.minpoly.degree

    def is_rational(self):
        return self.degree == 1

    def as_rational(self):
        if not self.is_rational():
            raise ValueError("not a rational number")
        return -self.minpoly[0] / self.minpoly[1]

    def enclosure(self, prec=None):
        """Isolating ball for this root at ``prec`` bits."""
        prec = prec or flint.ctx.prec
        if self.is_rational():
            r = self.as_rational()
            with flint.ctx.workprec(prec):
                return acb(flint.fmpq(int(r.numerator), int(r.denominator)))
        return self._roots(prec + 16)[self.index]

    def conjugates(self, prec=None):
        prec = prec or flint.ctx.prec
        return self._roots(prec + 16)

    def den(self):
        """Least positive integer D with D*y an algebraic integer."""
        coeffs = [int(c) for c in self.minpoly.coeffs]
        t = len(coeffs) - 1
        lead = coeffs[-1]
        for D in _divisors(lead):
            if all((coeffs[i] * D ** (t - i)) % lead == 0 for i in range(t)):
                return D
        return abs(lead)

    def __repr__(self):
        return f"AlgebraicNumber({self.minpoly!r}, root={self.enclosure(53)})"

    def to_json(self):
        return {"minpoly": self.minpoly.to_json(), "index": self.index}

    @classmethod
    def from_json(cls, data):
        return cls(Poly.from_json(data["minpoly"]), data.get("index", 0))

    def field(self):
        return NumberField(self.minpoly)

    def generator(self):
        """This number as an element of its own number field."""
        return self.field().gen()


class NumberField:
    """Q[w]/(m) with exact arithmetic; m need not be monic."""

    def __init__(self, m: Poly):
        self.m = m.monic()

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.m == other.m

    def elem(self, p):
        if not isinstance(p, Poly):
            p = Poly.const(p)
        return FieldElement(self, p % self.m if p.degree >= self.m.degree else p)

    def gen(self):
        return self.elem(Poly.x())

    @property
    def degree(self):
        return self.m.degree


class FieldElement:
    __slots__ = ("K", "p")

    def __init__(self, K, p):
        self.K = K
        self.p = p

    def _c(self, o):
        if isinstance(o, FieldElement):
            return o
        return self.K.elem(Poly.const(Q(o)))

    def __add__(self, o):
        return FieldElement(self.K, self.p + self._c(o).p)

    __radd__ = __add__

    def __sub__(self, o):
        return FieldElement(self.K, self.p - self._c(o).p)

    def __rsub__(self, o):
        return self._c(o) - self

    def __neg__(self):
        return FieldElement(self.K, -self.p)

    def __mul__(self, o):
        return self.K.elem(self.p * self._c(o).p)

    __rmul__ = __mul__

    def is_zero(self):
        return self.p.is_zero()

    def inverse(self):
        """Extended Euclid in Q[w]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in number field")
        r0, r1 = self.K.m, self.p
        s0, s1 = Poly(), Poly.const(1)
        while not r1.is_zero():
            quo, rem = r0.divmod(r1)
            r0, r1 = r1, rem
            s0, s1 = s1, s0 - quo * s1
        # r0 is a nonzero constant since m is irreducible
        return self.K.elem(s0 * (ONE / r0.lc))

    def __truediv__(self, o):
        return self * self._c(o).inverse()

    def __rtruediv__(self, o):
        return self._c(o) * self.inverse()

    def __eq__(self, o):
        if isinstance(o, FieldElement):
            return self.p == o.p
        return self.p == Poly.const(Q(o))

    def __hash__(self):
        return hash(self.p)

    def bitsize(self):
        total = 0
        for c in self.p.coeffs:
            total += int(gmpy2.bit_length(c.numerator)) + int(gmpy2.bit_length(c.denominator))
        return total

    def __repr__(self):
        return f"FieldElement({self.p!r})"


def is_zero_exact(x):
    if isinstance(x, FieldElement):
        return x.is_zero()
    return Q(x) == ZERO
