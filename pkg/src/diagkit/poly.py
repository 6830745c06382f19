"""Dense univariate polynomials, rational functions and sparse multivariate
polynomials over Q."""

from functools import reduce
from math import gcd

from .rational import ONE, Q, ZERO, q, qstr


def _strip(coeffs):
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return coeffs[:n]


class UPoly:
    """Univariate polynomial; ``coeffs[i]`` is the coefficient of ``x**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = tuple(_strip([Q(c) for c in coeffs]))

    @classmethod
    def _raw(cls, coeffs):
        obj = cls.__new__(cls)
        obj.coeffs = tuple(_strip(list(coeffs)))
        return obj

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def x(cls):
        return cls._raw((ZERO, ONE))

    @classmethod
    def monomial(cls, k, c=1):
        return cls._raw([ZERO] * k + [Q(c)])

    # --- basic structure -------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return ZERO

    def lc(self):
        return self.coeffs[-1] if self.coeffs else ZERO

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int,)) or hasattr(other, "denominator"):
            return self.coeffs == UPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "UPoly(%s)" % self.pretty()

    def pretty(self, var="x"):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else "%s^%d" % (var, i))
            if mono and c == 1:
                term = mono
            elif mono and c == -1:
                term = "-" + mono
            else:
                term = qstr(c) + ("*" + mono if mono else "")
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += (" - " + t[1:]) if t.startswith("-") else (" + " + t)
        return out

    # --- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, UPoly):
            return other
        return UPoly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return UPoly._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            c = Q(other)
            return UPoly._raw([c * a for a in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UPoly()
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return UPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = UPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divmod(self, other):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lcinv = ONE / other.lc()
        if len(rem) - 1 < db:
            return UPoly(), self
        quo = [ZERO] * (len(rem) - db)
        ob = other.coeffs
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] * lcinv
            quo[k] = c
            if c:
                for j in range(db + 1):
                    rem[k + j] -= c * ob[j]
        return UPoly._raw(quo), UPoly._raw(rem[:db])

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def exact_div(self, other):
        quo, rem = self.divmod(self._coerce(other))
        if rem:
            raise ArithmeticError("inexact polynomial division")
        return quo

    def monic(self):
        if not self.coeffs:
            return self
        return self * (ONE / self.lc())

    def gcd(self, other):
        from .polyalg import poly_gcd

        return poly_gcd(self, self._coerce(other))

    # --- calculus & evaluation ------------------------------------------
    def derivative(self):
        return UPoly._raw([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, value):
        acc = ZERO if not isinstance(value, UPoly) else UPoly()
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def compose(self, other):
        return self(self._coerce(other))

    def shift(self, k):
        """Multiply by ``x**k`` (``k`` may be negative when divisible)."""
        if k >= 0:
            return UPoly._raw([ZERO] * k + list(self.coeffs))
        if any(self.coeffs[:-k]):
            raise ArithmeticError("polynomial not divisible by x^%d" % -k)
        return UPoly._raw(self.coeffs[-k:])

    def scale_var(self, c):
        """``p(c*x)``."""
        c = Q(c)
        out, pw = [], ONE
        for a in self.coeffs:
            out.append(a * pw)
            pw *= c
        return UPoly._raw(out)

    def reverse(self, n=None):
        """``x**n * p(1/x)`` with ``n`` defaulting to the degree."""
        n = self.degree if n is None else n
        cs = list(self.coeffs) + [ZERO] * (n + 1 - len(self.coeffs))
        return UPoly._raw(cs[: n + 1][::-1])

    # --- integer content -------------------------------------------------
    def content(self):
        """Positive rational c with self/c primitive in Z[x]."""
        if not self.coeffs:
            return ONE
        nums = [int(c.numerator) for c in self.coeffs if c]
        dens = [int(c.denominator) for c in self.coeffs if c]
        g = reduce(gcd, nums)
        lcm = reduce(lambda a, b: a * b // gcd(a, b), dens)
        return Q(abs(g), lcm)

    def primitive(self):
        return self * (ONE / self.content())

    def to_json(self):
        return [qstr(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data):
        return cls([q(c) for c in data])

    @classmethod
    def from_roots(cls, roots):
        p = cls.const(1)
        for r in roots:
            p = p * cls((-Q(r), 1))
        return p


def poly_lcm(a, b):
    return (a * b).exact_div(a.gcd(b)).monic()


class RatFunc:
    """Reduced quotient of univariate polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce_=True):
        num = num if isinstance(num, UPoly) else UPoly.const(num)
        den = UPoly.const(1) if den is None else (den if isinstance(den, UPoly) else UPoly.const(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if reduce_ and den.degree > 0 and num:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        if not num:
            den = UPoly.const(1)
        c = den.lc()
        if c != 1:
            num = num * (ONE / c)
            den = den * (ONE / c)
        self.num, self.den = num, den

    @classmethod
    def x(cls):
        return cls(UPoly.x())

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFunc):
            return other
        return RatFunc(other)

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, (RatFunc, UPoly, int)) and not hasattr(other, "denominator"):
            return NotImplemented
        other = self._coerce(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den.degree == 0:
            return "RatFunc(%s)" % self.num.pretty()
        return "RatFunc((%s)/(%s))" % (self.num.pretty(), self.den.pretty())

    def __add__(self, other):
        other = self._coerce(other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce_=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num, reduce_=False)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, reduce_=False)

    def derivative(self):
        return RatFunc(self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den)

    def __call__(self, value):
        if isinstance(value, RatFunc):
            return self.compose(value)
        return self.num(value) / self.den(value)

    def compose(self, other):
        """``self(other(x))`` computed by homogenisation."""
        other = self._coerce(other)
        a, b = other.num, other.den
        d = max(self.num.degree, self.den.degree, 0)
        bpow = [UPoly.const(1)]
        apow = [UPoly.const(1)]
        for _ in range(d):
            bpow.append(bpow[-1] * b)
            apow.append(apow[-1] * a)

        def hom(p):
            acc = UPoly()
            for i, c in enumerate(p.coeffs):
                if c:
                    acc = acc + apow[i] * bpow[d - i] * c
            return acc

        return RatFunc(hom(self.num), hom(self.den))

    def valuation(self):
        vn = self.num.valuation()
        if vn is None:
            return None
        return vn - self.den.valuation()

    def to_series(self, trunc):
        from .series import USeries

        return USeries.from_poly(self.num, trunc) / USeries.from_poly(self.den, trunc)


class MPoly:
    """Sparse multivariate polynomial: exponent tuple -> coefficient."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = Q(c)
                if c:
                    self.terms[tuple(e)] = c

    @classmethod
    def var(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    def _coerce(self, other):
        if isinstance(other, MPoly):
            return other
        return MPoly.const(self.nvars, other)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.terms == other.terms
        return self.terms == self._coerce(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return "MPoly(%d, %r)" % (self.nvars, self.terms)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, ZERO) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        res = MPoly(self.nvars)
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = MPoly(self.nvars)
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, ZERO) + c1 * c2
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = MPoly.const(self.nvars, 1)
        for _ in range(n):
            result = result * self
        return result

    def derivative(self, i):
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MPoly(self.nvars, out)

    def degree(self, i=None):
        if not self.terms:
            return -1
        if i is None:
            return max(sum(e) for e in self.terms)
        return max(e[i] for e in self.terms)

    def substitute(self, values):
        """Evaluate with ``values[i]`` substituted for variable ``i``.

        Values may be ring elements of any kind supporting ``+``, ``*`` and
        integer powers (rationals, :class:`UPoly`, :class:`RatFunc`, series,
        or other :class:`MPoly`)."""
        total = None
        cache = {}
        for e, c in sorted(self.terms.items()):
            term = None
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = values[i] ** k
                    term = cache[key] if term is None else term * cache[key]
            term = c if term is None else term * c
            total = term if total is None else total + term
        if total is None:
            return ZERO
        return total

    def __call__(self, *values):
        return self.substitute(values)
