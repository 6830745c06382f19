"""Exact rational scalars.

Everything numeric in the package goes through :data:`Q`.  gmpy2's ``mpq``
is used when importable; otherwise :class:`fractions.Fraction` stands in with
the same observable behaviour (slower by roughly an order of magnitude).
"""

from fractions import Fraction

try:
    import gmpy2 as _gmpy2
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _gmpy2 = None

if _gmpy2 is not None:
    Q = _gmpy2.mpq
    _QTYPES = (type(_gmpy2.mpq(0)), Fraction)
    BACKEND = "gmpy2"
else:  # pragma: no cover
    Q = Fraction
    _QTYPES = (Fraction,)
    BACKEND = "fractions"

ZERO = Q(0)
ONE = Q(1)


def q(value):
    """Coerce ints, Fractions, mpq values and ``"a/b"`` strings to :data:`Q`."""
    if isinstance(value, str):
        s = value.strip()
        if "/" in s:
            num, den = s.split("/")
            return Q(int(num), int(den))
        return Q(int(s))
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    if isinstance(value, Fraction):
        return Q(value.numerator, value.denominator)
    return Q(value)


def qstr(value):
    """Bit-exact decimal string ``"num/den"`` (or ``"num"`` when integral)."""
    value = Q(value)
    if value.denominator == 1:
        return str(int(value.numerator))
    return "%d/%d" % (int(value.numerator), int(value.denominator))


def is_integer(value):
    return Q(value).denominator == 1


def rational_root(value, n):
    """Exact ``n``-th root of a rational, or ``None`` when it is not in Q."""
    value = Q(value)
    if n == 1:
        return value
    num, den = int(value.numerator), int(value.denominator)
    neg = num < 0
    if neg:
        if n % 2 == 0:
            return None
        num = -num
    rn = iroot(num, n)
    rd = iroot(den, n)
    if rn is None or rd is None:
        return None
    return Q(-rn if neg else rn, rd)


def iroot(m, n):
    """Exact integer ``n``-th root of ``m >= 0`` or ``None``."""
    if m < 0:
        raise ValueError("negative radicand")
    if _gmpy2 is not None:
        r, exact = _gmpy2.iroot(_gmpy2.mpz(m), n)
        return int(r) if exact else None
    if m < 2:
        return m
    r = int(round(m ** (1.0 / n))) if m < 2 ** 1000 else 1 << (m.bit_length() // n)
    # Newton refinement in integers
    while True:
        nr = ((n - 1) * r + m // r ** (n - 1)) // n
        if nr >= r:
            break
        r = nr
    while r ** n > m:
        r -= 1
    while (r + 1) ** n <= m:
        r += 1
    return r if r ** n == m else None


def rational_power(value, exponent):
    """``value ** exponent`` for a rational exponent, exact or ``None``."""
    exponent = Q(exponent)
    root = rational_root(value, int(exponent.denominator))
    if root is None:
        return None
    e = int(exponent.numerator)
    if e < 0:
        if root == 0:
            raise ZeroDivisionError("zero to a negative power")
        return ONE / root ** (-e)
    return root ** e


def binomial(top, k):
    """Generalized binomial coefficient for rational ``top`` and integer ``k``."""
    if k < 0:
        return ZERO
    top = Q(top)
    out = ONE
    for i in range(k):
        out = out * (top - i) / (i + 1)
    return out


def valuation(m, p):
    """p-adic valuation of a nonzero integer."""
    m = abs(int(m))
    if m == 0:
        raise ValueError("valuation of zero")
    if _gmpy2 is not None:
        return int(_gmpy2.remove(_gmpy2.mpz(m), p)[1])
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def is_probable_prime(m):
    m = int(m)
    if m < 2:
        return False
    if _gmpy2 is not None:
        return bool(_gmpy2.is_prime(m, 30))
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if m % p == 0:
            return m == p
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True
