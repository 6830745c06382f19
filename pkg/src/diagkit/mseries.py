"""Sparse truncated multivariate power series.

Exponent tuples are stored in *internal* coordinates.  Without a Laurent
variable they are the ordinary exponents.  With ``laurent=(j, s)`` the
variable ``j`` may carry negative exponents bounded below by ``-s`` times the
total degree of the other variables; internally its exponent is stored as
``e_j + s * sum(e_i for i != j)`` which is nonnegative, so that the monomial
map is a ring isomorphism onto ordinary power series.
"""

from .rational import ONE, Q, ZERO, binomial, qstr, rational_power
from .series import SeriesError, USeries


class MSeries:
    __slots__ = ("nvars", "bounds", "terms", "laurent")

    def __init__(self, nvars, bounds, terms=None, laurent=None):
        if len(bounds) != nvars:
            raise ValueError("one bound per variable is required")
        self.nvars = nvars
        self.bounds = tuple(int(b) for b in bounds)
        self.laurent = laurent
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = Q(c)
                if c:
                    ie = self._to_internal(tuple(e))
                    if self._fits(ie):
                        self.terms[ie] = self.terms.get(ie, ZERO) + c

    def _empty(self):
        out = MSeries.__new__(MSeries)
        out.nvars, out.bounds, out.laurent = self.nvars, self.bounds, self.laurent
        out.terms = {}
        return out

    # --- coordinates -----------------------------------------------------
    def _to_internal(self, e):
        if self.laurent is None:
            return e
        j, s = self.laurent
        other = sum(e) - e[j]
        f = list(e)
        f[j] = e[j] + s * other
        return tuple(f)

    def _to_actual(self, e):
        if self.laurent is None:
            return e
        j, s = self.laurent
        other = sum(e) - e[j]
        f = list(e)
        f[j] = e[j] - s * other
        return tuple(f)

    def _fits(self, ie):
        for a, b in zip(ie, self.bounds):
            if a < 0 or a > b:
                return False
        return True

    # --- constructors ----------------------------------------------------
    @classmethod
    def const(cls, nvars, bounds, c, laurent=None):
        return cls(nvars, bounds, {(0,) * nvars: c}, laurent)

    @classmethod
    def var(cls, nvars, bounds, i, laurent=None):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, bounds, {tuple(e): 1}, laurent)

    @classmethod
    def monomial(cls, nvars, bounds, exps, c=1, laurent=None):
        return cls(nvars, bounds, {tuple(exps): c}, laurent)

    def like(self, terms):
        """New series with the same shape built from *actual* exponents."""
        return MSeries(self.nvars, self.bounds, terms, self.laurent)

    # --- access ----------------------------------------------------------
    def coeff(self, exps):
        return self.terms.get(self._to_internal(tuple(exps)), ZERO)

    def items(self):
        """(actual exponent tuple, coefficient) pairs."""
        for e, c in self.terms.items():
            yield self._to_actual(e), c

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MSeries):
            return NotImplemented
        return (self.bounds, self.laurent, self.terms) == (other.bounds, other.laurent, other.terms)

    def __repr__(self):
        return "MSeries(nvars=%d, bounds=%r, %d terms)" % (self.nvars, self.bounds, len(self.terms))

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, ZERO)

    def to_json(self):
        return {
            "nvars": self.nvars,
            "bounds": list(self.bounds),
            "laurent": list(self.laurent) if self.laurent else None,
            "terms": [[list(e), qstr(c)] for e, c in sorted(self.items())],
        }

    # --- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MSeries):
            if other.bounds != self.bounds or other.laurent != self.laurent:
                raise ValueError("incompatible series shapes")
            return other
        return MSeries.const(self.nvars, self.bounds, other, self.laurent)

    def __add__(self, other):
        other = self._coerce(other)
        out = self._empty()
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, ZERO) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        out.terms = t
        return out

    __radd__ = __add__

    def __neg__(self):
        out = self._empty()
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = Q(c)
        out = self._empty()
        if c:
            out.terms = {e: c * v for e, v in self.terms.items()}
        return out

    def __mul__(self, other):
        if not isinstance(other, MSeries):
            return self.scale(other)
        other = self._coerce(other)
        bounds = self.bounds
        n = self.nvars
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        get = out.get
        bitems = list(b.items())
        rng = range(n)
        for e1, c1 in a.items():
            room = [bounds[i] - e1[i] for i in rng]
            for e2, c2 in bitems:
                ok = True
                for i in rng:
                    if e2[i] > room[i]:
                        ok = False
                        break
                if not ok:
                    continue
                e = tuple([e1[i] + e2[i] for i in rng])
                out[e] = get(e, ZERO) + c1 * c2
        res = self._empty()
        res.terms = {e: c for e, c in out.items() if c}
        return res

    __rmul__ = __mul__

    def _binomial_series(self, s):
        """``self**s`` through the binomial expansion around the constant term."""
        a0 = self.constant_term()
        if not a0:
            raise SeriesError("power of a series with zero constant term")
        c = rational_power(a0, s)
        if c is None:
            raise SeriesError("constant term %s has no rational power %s" % (qstr(a0), qstr(s)))
        zero = (0,) * self.nvars
        h = self._empty()
        inv = ONE / a0
        h.terms = {e: v * inv for e, v in self.terms.items() if e != zero}
        result = MSeries.const(self.nvars, self.bounds, c, self.laurent)
        power = MSeries.const(self.nvars, self.bounds, 1, self.laurent)
        k = 0
        while True:
            k += 1
            power = power * h
            if not power.terms:
                break
            coef = binomial(s, k) * c
            if coef:
                result = result + power.scale(coef)
        return result

    def inverse(self):
        return self._binomial_series(Q(-1))

    def power(self, s):
        s = Q(s)
        if s.denominator == 1 and s >= 0:
            result = MSeries.const(self.nvars, self.bounds, 1, self.laurent)
            base, e = self, int(s)
            while e:
                if e & 1:
                    result = result * base
                e >>= 1
                if e:
                    base = base * base
            return result
        return self._binomial_series(s)

    def __truediv__(self, other):
        if not isinstance(other, MSeries):
            return self.scale(ONE / Q(other))
        return self * other.inverse()

    def __pow__(self, e):
        return self.power(e)

    # --- extraction ------------------------------------------------------
    def diagonal(self, trunc=None):
        """Coefficients with all actual exponents equal, as a :class:`USeries`."""
        if trunc is None:
            trunc = min(self.bounds) if self.laurent is None else self.bounds[0]
        out = [ZERO] * (trunc + 1)
        for e, c in self.items():
            m = e[0]
            if m <= trunc and all(x == m for x in e):
                out[m] += c
        return USeries(out, trunc)

    def set_zero(self, k):
        """Substitute ``z_k = 0``."""
        out = self._empty()
        out.terms = {e: c for e, c in self.terms.items() if self._to_actual(e)[k] == 0}
        return out

    def to_useries(self, trunc=None):
        if self.nvars != 1:
            raise ValueError("univariate series expected")
        trunc = self.bounds[0] if trunc is None else trunc
        out = [ZERO] * (trunc + 1)
        for (e,), c in self.items():
            if e <= trunc:
                out[e] = c
        return USeries(out, trunc)
