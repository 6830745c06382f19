"""Series modulo primes and algebraic relations over F_p(x)."""

from dataclasses import dataclass

from .fp import nullspace_mod_p, reduce_rational, smallest_kernel_vector
from .kernels import conv_mod_p
from .poly import UPoly
from .rational import binomial


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class FpSeries:
    p: int
    coeffs: tuple

    @property
    def trunc(self):
        return len(self.coeffs) - 1

    def __mul__(self, other):
        t = min(self.trunc, other.trunc)
        return FpSeries(self.p, tuple(conv_mod_p(list(self.coeffs), list(other.coeffs), self.p, t)))

    def power(self, k):
        out = FpSeries(self.p, (1,) + (0,) * self.trunc)
        for _ in range(k):
            out = out * self
        return out

    def to_json(self):
        return {"p": self.p, "coeffs": list(self.coeffs)}


def reduce_mod_p(f, p):
    out = []
    for n, c in enumerate(f.coeffs):
        try:
            out.append(reduce_rational(c, p))
        except ZeroDivisionError:
            raise ReductionError("coefficient %d has a denominator divisible by %d" % (n, p)) from None
    return FpSeries(p, tuple(out))


@dataclass
class AlgRelation:
    """``sum coeffs[(i, j)] x^i y^j = 0`` over F_p."""

    p: int
    coeffs: dict
    dx: int
    dy: int
    guard: int

    @property
    def y_degree(self):
        return max(j for _, j in self.coeffs)

    @property
    def x_degree(self):
        return max(i for i, _ in self.coeffs)

    def y_coefficient(self, j):
        """Coefficient of ``y^j`` as a list of residues indexed by the power of ``x``."""
        out = [0] * (self.dx + 1)
        for (i, jj), c in self.coeffs.items():
            if jj == j:
                out[i] = c
        while len(out) > 1 and not out[-1]:
            out.pop()
        return out

    def evaluate(self, f):
        """``C(x, f(x))`` as a list of residues."""
        p, T = self.p, f.trunc
        out = [0] * (T + 1)
        powers = [FpSeries(p, (1,) + (0,) * T)]
        for j in range(1, self.y_degree + 1):
            powers.append(powers[-1] * f)
        for (i, j), c in self.coeffs.items():
            for n in range(T + 1 - i):
                out[n + i] = (out[n + i] + c * powers[j].coeffs[n]) % p
        return out

    def pretty(self, var="z"):
        def signed(c):
            return c - self.p if c > self.p // 2 else c

        groups = []
        for j in range(self.y_degree, -1, -1):
            poly = UPoly([signed(c) for c in self.y_coefficient(j)])
            if not poly:
                continue
            ys = "" if j == 0 else ("y" if j == 1 else "y^%d" % j)
            ps = poly.pretty(var)
            if not ys:
                groups.append(ps)
            elif poly == UPoly.const(1):
                groups.append(ys)
            else:
                groups.append("(%s)*%s" % (ps, ys))
        return " + ".join(groups).replace("+ -", "- ") + "  (mod %d)" % self.p

    def to_json(self):
        mat = [[self.coeffs.get((i, j), 0) for i in range(self.dx + 1)] for j in range(self.dy + 1)]
        return {"p": self.p, "dx": self.dx, "dy": self.dy, "guard": self.guard, "matrix": mat}

    @classmethod
    def from_json(cls, data):
        coeffs = {}
        for j, row in enumerate(data["matrix"]):
            for i, c in enumerate(row):
                if c:
                    coeffs[(i, j)] = c
        return cls(data["p"], coeffs, data["dx"], data["dy"], data["guard"])


class InsufficientTerms(ValueError):
    pass


def _relation(f, powers, dx, dy, guard):
    p = f.p
    T = f.trunc
    cols = [(i, j) for j in range(dy + 1) for i in range(dx + 1)]
    used = T + 1 - guard
    rows = []
    for n in range(T + 1):
        rows.append([powers[j].coeffs[n - i] if n >= i else 0 for i, j in cols])
    basis = nullspace_mod_p(rows[:used], len(cols), p)
    if not basis:
        return None
    v = smallest_kernel_vector(basis, p)
    for row in rows[used:]:
        if sum(a * b for a, b in zip(row, v)) % p:
            return None
    coeffs = {c: x for c, x in zip(cols, v) if x}
    if all(j == 0 for _, j in coeffs):
        return None
    return AlgRelation(p, coeffs, dx, dy, guard)


def minpoly_mod_p(f, dx, dy, guard=10):
    """Smallest relation ``C(x, f) = 0`` with ``deg_x <= dx``, ``deg_y <= dy``
    (search by ``dy`` then ``dx``), or ``None``."""
    if f.trunc + 1 < (dx + 1) * (dy + 1) + guard:
        raise InsufficientTerms("need %d terms, have %d" % ((dx + 1) * (dy + 1) + guard, f.trunc + 1))
    powers = [FpSeries(f.p, (1,) + (0,) * f.trunc)]
    for _ in range(dy):
        powers.append(powers[-1] * f)
    for ddy in range(1, dy + 1):
        for ddx in range(0, dx + 1):
            rel = _relation(f, powers, ddx, ddy, guard)
            if rel is not None:
                return rel
    return None


def hasse_poly(p):
    """``sum_{n <= (p-1)/2} C((p-1)/2, n)^2 16^n z^n`` reduced mod ``p`` (residues in ``[0, p)``)."""
    if p == 2:
        raise ValueError("p must be odd")
    h = (p - 1) // 2
    return UPoly([binomial(h, n) ** 2 * 16 ** n % p for n in range(h + 1)])
