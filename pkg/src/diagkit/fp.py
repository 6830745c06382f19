"""Finite-field vectors, nullspaces and multimodular reconstruction."""

from math import gcd, isqrt

from .kernels import rref_mod_p
from .rational import Q, is_probable_prime


class FpVec:
    """Residues modulo a prime ``p``."""

    __slots__ = ("p", "entries")

    def __init__(self, p, entries):
        if not is_probable_prime(p):
            raise ValueError("%d is not prime" % p)
        self.p = int(p)
        self.entries = [int(e) % self.p for e in entries]

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if isinstance(other, FpVec):
            return self.p == other.p and self.entries == other.entries
        return self.entries == list(other)

    def __repr__(self):
        return "FpVec(%d, %r)" % (self.p, self.entries)


def reduce_rational(c, p):
    """Residue of a rational modulo ``p``; raises when ``p`` divides the denominator."""
    c = Q(c)
    den = int(c.denominator)
    if den % p == 0:
        raise ZeroDivisionError("denominator divisible by %d" % p)
    return int(c.numerator) * pow(den, -1, p) % p


def nullspace_mod_p(matrix, ncols, p):
    """Basis of the right kernel of ``matrix`` (list of rows) over F_p."""
    if not matrix:
        return [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols)]
    rows, pivots = rref_mod_p(matrix, p)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = 1
        for r, c in zip(rows, pivots):
            if r[f]:
                v[c] = (-r[f]) % p
        basis.append(v)
    return basis


def smallest_kernel_vector(basis, p, order=None):
    """The kernel vector whose highest-ranked nonzero position is as low as
    possible, scaled so that entry is 1.

    ``order`` lists column indices from the lowest to the highest rank
    (default: natural order).  The result is canonical for the kernel space.
    """
    if not basis:
        return None
    n = len(basis[0])
    order = list(range(n)) if order is None else list(order)
    rev = order[::-1]
    perm = [[v[c] for c in rev] for v in basis]
    rows, pivots = rref_mod_p(perm, p)
    last = rows[-1]
    out = [0] * n
    for k, c in enumerate(rev):
        out[c] = last[k]
    return out


def crt_pair(r1, m1, r2, m2):
    g = gcd(m1, m2)
    if g != 1:
        raise ValueError("moduli not coprime")
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    return r1 + m1 * t, m1 * m2


def rational_reconstruct(a, m):
    """Rational ``n/d`` with ``|n|, d <= sqrt(m/2)`` congruent to ``a`` mod ``m``, or ``None``."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        qt = r0 // r1
        r0, r1 = r1, r0 - qt * r1
        s0, s1 = s1, s0 - qt * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if gcd(r1, abs(s1)) != 1:
        return None
    return Q(r1, s1) if s1 > 0 else Q(-r1, -s1)


_PRIMES = []


def large_primes(count, start=2 ** 31 - 1):
    """Deterministic list of primes just below ``start`` (cached)."""
    if len(_PRIMES) >= count:
        return _PRIMES[:count]
    c = _PRIMES[-1] - 2 if _PRIMES else start
    while len(_PRIMES) < count:
        if is_probable_prime(c):
            _PRIMES.append(c)
        c -= 2
    return _PRIMES[:count]
