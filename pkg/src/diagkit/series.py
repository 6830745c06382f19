"""Truncated univariate power series over Q.

A :class:`USeries` knows its coefficients of ``x**0 .. x**trunc`` exactly and
nothing beyond.  Binary operations truncate to the smaller of the two orders.
"""

from .rational import ONE, Q, ZERO, q, qstr, rational_power


class SeriesError(ValueError):
    pass


class USeries:
    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs, trunc=None):
        cs = [Q(c) for c in coeffs]
        if trunc is None:
            trunc = len(cs) - 1
        if trunc < -1:
            raise SeriesError("truncation order below -1")
        if len(cs) < trunc + 1:
            cs.extend([ZERO] * (trunc + 1 - len(cs)))
        self.coeffs = cs[: trunc + 1]
        self.trunc = trunc

    @classmethod
    def _raw(cls, coeffs, trunc):
        obj = cls.__new__(cls)
        obj.coeffs = coeffs
        obj.trunc = trunc
        return obj

    # --- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, trunc):
        return cls._raw([ZERO] * (trunc + 1), trunc)

    @classmethod
    def one(cls, trunc):
        return cls.const(1, trunc)

    @classmethod
    def const(cls, c, trunc):
        cs = [ZERO] * (trunc + 1)
        if trunc >= 0:
            cs[0] = Q(c)
        return cls._raw(cs, trunc)

    @classmethod
    def x(cls, trunc):
        return cls.monomial(1, trunc)

    @classmethod
    def monomial(cls, k, trunc, c=1):
        cs = [ZERO] * (trunc + 1)
        if k <= trunc:
            cs[k] = Q(c)
        return cls._raw(cs, trunc)

    @classmethod
    def from_poly(cls, p, trunc):
        cs = list(p.coeffs[: trunc + 1])
        cs.extend([ZERO] * (trunc + 1 - len(cs)))
        return cls._raw(cs, trunc)

    @classmethod
    def from_function(cls, fn, trunc):
        return cls([fn(n) for n in range(trunc + 1)], trunc)

    @classmethod
    def geometric(cls, ratio, trunc):
        r = Q(ratio)
        cs, c = [], ONE
        for _ in range(trunc + 1):
            cs.append(c)
            c *= r
        return cls._raw(cs, trunc)

    # --- container protocol ----------------------------------------------
    def __len__(self):
        return self.trunc + 1

    def __getitem__(self, n):
        if isinstance(n, slice):
            return self.coeffs[n]
        if n < 0:
            raise IndexError(n)
        if n > self.trunc:
            raise IndexError("coefficient %d beyond truncation %d" % (n, self.trunc))
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, USeries):
            return self.trunc == other.trunc and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.trunc, tuple(self.coeffs)))

    def __repr__(self):
        shown = ", ".join(qstr(c) for c in self.coeffs[:8])
        more = ", ..." if self.trunc >= 8 else ""
        return "USeries([%s%s], trunc=%d)" % (shown, more, self.trunc)

    def agrees(self, other, upto=None):
        """True when both series share coefficients ``0..upto`` (default: common window)."""
        other = other if isinstance(other, USeries) else USeries(other)
        n = min(self.trunc, other.trunc) if upto is None else upto
        if n > self.trunc or n > other.trunc:
            return False
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def truncate(self, trunc):
        if trunc > self.trunc:
            raise SeriesError("cannot extend truncation from %d to %d" % (self.trunc, trunc))
        return USeries._raw(self.coeffs[: trunc + 1], trunc)

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def is_zero(self):
        return not any(self.coeffs)

    def to_ints(self):
        out = []
        for c in self.coeffs:
            if c.denominator != 1:
                raise SeriesError("non-integral coefficient %s" % qstr(c))
            out.append(int(c.numerator))
        return out

    def to_json(self):
        return {"trunc": self.trunc, "coeffs": [qstr(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data):
        return cls([q(c) for c in data["coeffs"]], data["trunc"])

    def pretty(self, var="x", terms=None):
        n = self.trunc if terms is None else min(terms - 1, self.trunc)
        parts = []
        for i in range(n + 1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else "%s^%d" % (var, i))
            parts.append(qstr(c) + ("*" + mono if mono else ""))
        return (" + ".join(parts) or "0") + " + O(%s^%d)" % (var, self.trunc + 1)

    # --- ring operations -------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, USeries):
            return other
        return USeries.const(other, self.trunc)

    def __add__(self, other):
        other = self._coerce(other)
        t = min(self.trunc, other.trunc)
        a, b = self.coeffs, other.coeffs
        return USeries._raw([a[i] + b[i] for i in range(t + 1)], t)

    __radd__ = __add__

    def __neg__(self):
        return USeries._raw([-c for c in self.coeffs], self.trunc)

    def __sub__(self, other):
        other = self._coerce(other)
        t = min(self.trunc, other.trunc)
        a, b = self.coeffs, other.coeffs
        return USeries._raw([a[i] - b[i] for i in range(t + 1)], t)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = Q(c)
        return USeries._raw([c * a for a in self.coeffs], self.trunc)

    def __mul__(self, other):
        if not isinstance(other, USeries):
            return self.scale(other)
        t = min(self.trunc, other.trunc)
        a, b = self.coeffs, other.coeffs
        out = [ZERO] * (t + 1)
        nzb = [(j, bj) for j, bj in enumerate(b[: t + 1]) if bj]
        for i in range(t + 1):
            ai = a[i]
            if not ai:
                continue
            lim = t - i
            for j, bj in nzb:
                if j > lim:
                    break
                out[i + j] += ai * bj
        return USeries._raw(out, t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, USeries):
            return self.scale(ONE / Q(other))
        return self * other.invert()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.invert()

    def __pow__(self, e):
        if isinstance(e, int):
            if e < 0:
                return self.invert() ** (-e)
            result = USeries.one(self.trunc)
            base = self
            while e:
                if e & 1:
                    result = result * base
                e >>= 1
                if e:
                    base = base * base
            return result
        return self.power(e)

    # --- calculus --------------------------------------------------------
    def derivative(self):
        cs = [i * self.coeffs[i] for i in range(1, self.trunc + 1)]
        return USeries._raw(cs, self.trunc - 1)

    def integrate(self, c=0):
        cs = [Q(c)] + [self.coeffs[i] / (i + 1) for i in range(self.trunc + 1)]
        return USeries._raw(cs, self.trunc + 1)

    def theta(self):
        """Euler operator ``x d/dx``; keeps the truncation order."""
        return USeries._raw([i * c for i, c in enumerate(self.coeffs)], self.trunc)

    def shift(self, k):
        """Multiply by ``x**k``; negative ``k`` divides and needs vanishing low terms."""
        if k >= 0:
            return USeries._raw([ZERO] * k + list(self.coeffs), self.trunc + k)
        k = -k
        if any(self.coeffs[:k]):
            raise SeriesError("series not divisible by x^%d" % k)
        return USeries._raw(self.coeffs[k:], self.trunc - k)

    def scale_var(self, c):
        """``f(c*x)``."""
        c = Q(c)
        out, pw = [], ONE
        for a in self.coeffs:
            out.append(a * pw)
            pw *= c
        return USeries._raw(out, self.trunc)

    def substitute_power(self, k, c=1):
        """``f(c * x**k)`` for a positive integer ``k``, truncation scaled accordingly."""
        t = self.trunc * k + (k - 1)
        out = [ZERO] * (t + 1)
        c = Q(c)
        pw = ONE
        for i, a in enumerate(self.coeffs):
            out[i * k] = a * pw
            pw *= c
        return USeries._raw(out, t)

    def __call__(self, value):
        if isinstance(value, USeries):
            return self.compose(value)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    # --- transcendental operations ---------------------------------------
    def invert(self):
        a = self.coeffs
        if not a or not a[0]:
            raise SeriesError("series with zero constant term is not invertible")
        t = self.trunc
        inv0 = ONE / a[0]
        b = [inv0] + [ZERO] * t
        nz = [(k, a[k]) for k in range(1, t + 1) if a[k]]
        for n in range(1, t + 1):
            s = ZERO
            for k, ak in nz:
                if k > n:
                    break
                s += ak * b[n - k]
            b[n] = -s * inv0
        return USeries._raw(b, t)

    def compose(self, g):
        """``self(g(x))`` with ``g(0) = 0``."""
        if g.trunc >= 0 and g.coeffs[0]:
            raise SeriesError("inner series must vanish at 0")
        gv = g.valuation()
        if gv is None:
            return USeries.const(self.coeffs[0], g.trunc)
        t = min(g.trunc, (self.trunc + 1) * gv - 1)
        g = g.truncate(t)
        acc = USeries.zero(t)
        for c in reversed(self.coeffs[: t // gv + 1]):
            acc = acc * g
            acc.coeffs[0] += c
        return acc

    def reverse(self):
        """Compositional inverse via Lagrange inversion."""
        a = self.coeffs
        if self.trunc < 1 or a[0] or not a[1]:
            raise SeriesError("reverse needs a0 = 0 and a1 != 0")
        t = self.trunc
        h = self.shift(-1).invert()  # x / f(x)
        out = [ZERO] * (t + 1)
        hp = USeries.one(t - 1)
        for n in range(1, t + 1):
            hp = hp * h.truncate(t - 1)
            out[n] = hp.coeffs[n - 1] / n
        return USeries._raw(out, t)

    def exp(self):
        a = self.coeffs
        if a and a[0]:
            raise SeriesError("exp needs a vanishing constant term")
        t = self.trunc
        b = [ONE] + [ZERO] * t
        ka = [(k, k * a[k]) for k in range(1, t + 1) if a[k]]
        for n in range(1, t + 1):
            s = ZERO
            for k, c in ka:
                if k > n:
                    break
                s += c * b[n - k]
            b[n] = s / n
        return USeries._raw(b, t)

    def log(self):
        if not self.coeffs or self.coeffs[0] != 1:
            raise SeriesError("log needs constant term 1")
        d = self.derivative()
        return (d * self.truncate(self.trunc - 1).invert()).integrate()

    def power(self, s):
        """``self ** s`` for rational ``s``; the constant term must have an exact ``s``-th power."""
        s = Q(s)
        a = self.coeffs
        if not a:
            return self
        if s.denominator == 1 and s >= 0:
            return self ** int(s)
        a0 = a[0]
        if not a0:
            raise SeriesError("fractional or negative power of a series with zero constant term")
        c = rational_power(a0, s)
        if c is None:
            raise SeriesError("constant term %s has no rational power %s" % (qstr(a0), qstr(s)))
        u = self if a0 == 1 else self.scale(ONE / a0)
        t = self.trunc
        ua = u.coeffs
        b = [ONE] + [ZERO] * t
        nz = [(k, ua[k]) for k in range(1, t + 1) if ua[k]]
        s1 = s + 1
        for n in range(1, t + 1):
            acc = ZERO
            for k, ak in nz:
                if k > n:
                    break
                acc += (s1 * k - n) * ak * b[n - k]
            b[n] = acc / n
        res = USeries._raw(b, t)
        return res if c == 1 else res.scale(c)

    def nth_root(self, n):
        if n < 1:
            raise SeriesError("root index must be positive")
        return self.power(Q(1, n))


def series_invert(f):
    return f.invert()


def series_compose(f, g):
    return f.compose(g)


def series_reverse(f):
    return f.reverse()


def series_exp(f):
    return f.exp()


def series_log(f):
    return f.log()


def series_nth_root(f, n):
    return f.nth_root(n)
