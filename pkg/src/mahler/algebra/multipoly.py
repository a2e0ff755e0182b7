"""Sparse polynomials in (z, X_1, ..., X_n) with rational coefficients."""

import gmpy2

from .poly import Poly
from .scalars import ONE, ZERO, Q, qstr
from .series import TruncatedSeries, _mul_trunc


class MultiPoly:
    """Sparse map exponent-tuple -> coefficient; slot 0 is the z-degree.

    Zero coefficients are never stored.
    """

    __slots__ = ("terms", "nvars")

    def __init__(self, terms=None, nvars=None):
        clean = {}
        if terms:
            for e, c in dict(terms).items():
                c = Q(c)
                if c:
                    e = tuple(int(x) for x in e)
                    clean[e] = clean.get(e, ZERO) + c
                    if not clean[e]:
                        del clean[e]
        if nvars is None:
            if not clean:
                raise ValueError("nvars is required for an empty MultiPoly")
            nvars = len(next(iter(clean)))
        for e in clean:
            if len(e) != nvars or min(e) < 0:
                raise ValueError(f"bad exponent vector {e}")
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "nvars", nvars)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    @classmethod
    def _raw(cls, terms, nvars):
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", {e: c for e, c in terms.items() if c})
        object.__setattr__(obj, "nvars", nvars)
        return obj

    @classmethod
    def zero(cls, nvars):
        return cls._raw({}, nvars)

    @classmethod
    def var(cls, i, nvars):
        e = [0] * nvars
        e[i] = 1
        return cls._raw({tuple(e): ONE}, nvars)

    @classmethod
    def const(cls, c, nvars):
        return cls._raw({(0,) * nvars: Q(c)}, nvars)

    @classmethod
    def from_poly_z(cls, p: Poly, nvars):
        pad = (0,) * (nvars - 1)
        return cls._raw({(i,) + pad: c for i, c in enumerate(p.coeffs)}, nvars)

    @property
    def n(self):
        """Number of X variables."""
        return self.nvars - 1

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def deg_z(self):
        return max((e[0] for e in self.terms), default=-1)

    def deg_X(self):
        """Total degree in X_1..X_n."""
        return max((sum(e[1:]) for e in self.terms), default=-1)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def length(self):
        return sum((abs(c) for c in self.terms.values()), ZERO)

    def height(self):
        return max((abs(c) for c in self.terms.values()), default=ZERO)

    def is_integral(self):
        return all(c.denominator == 1 for c in self.terms.values())

    def coeff(self, e):
        return self.terms.get(tuple(e), ZERO)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "MultiPoly(0)"
        parts = []
        for e in sorted(self.terms):
            mon = []
            if e[0]:
                mon.append("z" if e[0] == 1 else f"z^{e[0]}")
            for i, a in enumerate(e[1:], 1):
                if a:
                    mon.append(f"X{i}" if a == 1 else f"X{i}^{a}")
            parts.append(qstr(self.terms[e]) + ("*" + "*".join(mon) if mon else ""))
        return "MultiPoly(" + " + ".join(parts) + ")"

    def _check(self, other):
        if not isinstance(other, MultiPoly):
            return MultiPoly.const(other, self.nvars)
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return MultiPoly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = Q(other)
            return MultiPoly._raw({e: c * v for e, v in self.terms.items()}, self.nvars)
        other = self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return MultiPoly._raw(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = MultiPoly.const(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def primitive(self):
        """Integer multiple with coprime integer coefficients, first term positive."""
        if not self.terms:
            return self
        den = gmpy2.mpz(1)
        for c in self.terms.values():
            den = gmpy2.lcm(den, c.denominator)
        g = gmpy2.mpz(0)
        for c in self.terms.values():
            g = gmpy2.gcd(g, (c * den).numerator)
        s = gmpy2.mpq(den, g)
        lead = self.terms[max(self.terms)]
        if lead < 0:
            s = -s
        return self * s

    def evaluate(self, z, xs, coerce=None):
        """Evaluate at z and X = xs in any ring with + and *.

        ``coerce`` maps rational coefficients into that ring (e.g. to acb).
        """
        if len(xs) != self.n:
            raise ValueError("wrong number of X values")
        conv = coerce or (lambda c: c)
        one = conv(ONE)
        zp = _power_cache(z, one)
        xp = [_power_cache(x, one) for x in xs]
        total = conv(ZERO)
        for e, c in self.terms.items():
            t = zp(e[0])
            for i, a in enumerate(e[1:]):
                if a:
                    t = t * xp[i](a)
            total = total + t * conv(c)
        return total

    def group_X(self):
        """Map X-exponent tuple -> Poly in z."""
        groups = {}
        for e, c in self.terms.items():
            groups.setdefault(e[1:], {})[e[0]] = c
        out = {}
        for ax, zc in groups.items():
            lst = [ZERO] * (max(zc) + 1)
            for k, c in zc.items():
                lst[k] = c
            out[ax] = Poly._raw(lst)
        return out

    @classmethod
    def from_groups(cls, groups, nvars):
        terms = {}
        for ax, p in groups.items():
            for k, c in enumerate(p.coeffs):
                if c:
                    terms[(k,) + tuple(ax)] = c
        return cls._raw(terms, nvars)

    def eval_series(self, fs, N):
        """P(z, f_1, ..., f_n) as a series to order N.

        fs are TruncatedSeries; powers are cached per variable.
        """
        if len(fs) != self.n:
            raise ValueError("wrong number of series")
        fcs = [f.coefficients(N) for f in fs]
        caches = [{0: [ONE] + [ZERO] * (N - 1)} for _ in fs]

        def fpow(i, a):
            cache = caches[i]
            if a not in cache:
                prev = fpow(i, a - 1)
                cache[a] = _mul_trunc(prev, fcs[i], N)
            return cache[a]

        out = [ZERO] * N
        by_x = {}
        for e, c in self.terms.items():
            by_x.setdefault(e[1:], []).append((e[0], c))
        for ax, zterms in by_x.items():
            prod = [ONE] + [ZERO] * (N - 1)
            for i, a in enumerate(ax):
                if a:
                    prod = _mul_trunc(prod, fpow(i, a), N)
            for k, c in zterms:
                for j in range(N - k):
                    if prod[j]:
                        out[j + k] += c * prod[j]
        return TruncatedSeries._raw(out, N)

    def to_json(self):
        return [{"exponents": list(e), "coeff": qstr(c)} for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data, nvars=None):
        terms = {tuple(r["exponents"]): Q(r["coeff"]) for r in data}
        return cls(terms, nvars)


def _power_cache(x, one=ONE):
    cache = {0: one, 1: x}

    def get(k):
        if k not in cache:
            h = k // 2
            cache[k] = get(h) * get(k - h)
        return cache[k]

    return get


def poly_length(P):
    """L(P): sum of absolute values of the coefficients."""
    if isinstance(P, (MultiPoly, Poly)):
        return P.length()
    raise TypeError("poly_length expects a Poly or MultiPoly")
