"""Heavier polynomial algorithms: modular gcd, rational roots, determinants
of polynomial matrices and squarefree parts."""

from .fp import crt_pair, large_primes, rational_reconstruct
from .poly import UPoly
from .rational import ONE, Q, ZERO


def integer_primitive(p):
    """(integer coefficient list, positive rational c) with p = c * ints."""
    c = p.content()
    if p.coeffs and p.lc() < 0:
        c = -c
    return [int((a / c).numerator) for a in p.coeffs], c


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _rem_mod(a, b, p):
    a = list(a)
    inv = pow(b[-1], p - 2, p)
    db = len(b) - 1
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db] * inv % p
        if c:
            for j in range(db + 1):
                a[k + j] = (a[k + j] - c * b[j]) % p
    return _trim(a[:db])


def gcd_mod_p(a, b, p):
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        a, b = b, _rem_mod(a, b, p)
    if not a:
        return a
    inv = pow(a[-1], p - 2, p)
    return [x * inv % p for x in a]


def _euclid_gcd(a, b):
    while b:
        a, b = b, a.divmod(b)[1].monic()
    return a.monic()


def poly_gcd(a, b):
    """Monic gcd over Q; multimodular with exact verification for larger inputs."""
    if not a:
        return b.monic()
    if not b:
        return a.monic()
    if min(a.degree, b.degree) <= 6:
        return _euclid_gcd(a, b)
    A, _ = integer_primitive(a)
    B, _ = integer_primitive(b)
    best_deg = None
    residues = None
    modulus = 1
    count = 0
    for p in large_primes(200):
        if A[-1] % p == 0 or B[-1] % p == 0:
            continue
        g = gcd_mod_p(A, B, p)
        d = len(g) - 1
        if d == 0:
            return UPoly.const(1)
        if best_deg is None or d < best_deg:
            best_deg, residues, modulus, count = d, list(g), p, 1
        elif d > best_deg:
            continue
        else:
            residues = [crt_pair(r, modulus, x, p)[0] for r, x in zip(residues, g)]
            modulus *= p
            count += 1
        cand = [rational_reconstruct(r, modulus) for r in residues]
        if any(c is None for c in cand):
            continue
        G = UPoly(cand)
        if not a.divmod(G)[1] and not b.divmod(G)[1]:
            return G.monic()
    return _euclid_gcd(a, b)


def squarefree_part(p):
    if p.degree <= 0:
        return UPoly.const(1)
    g = poly_gcd(p, p.derivative())
    return p.exact_div(g).monic()


def _divisors(n):
    n = abs(n)
    if n == 0:
        return [0]
    small = []
    large = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
        if i > 10 ** 6:
            raise ValueError("coefficient too large for rational-root search")
    return small + large[::-1]


def rational_roots(p):
    """Rational roots of ``p`` with multiplicities, as a list of (root, mult),
    plus the cofactor without rational roots."""
    if not p:
        raise ValueError("roots of the zero polynomial")
    out = []
    rest = p
    v = rest.valuation()
    if v:
        out.append((ZERO, v))
        rest = rest.shift(-v)
    ints, _ = integer_primitive(rest)
    if len(ints) > 1:
        cands = set()
        for u in _divisors(ints[0]):
            for w in _divisors(ints[-1]):
                cands.add(Q(u, w))
                cands.add(Q(-u, w))
        for r in sorted(cands):
            m = 0
            lin = UPoly((-r, 1))
            while rest.degree >= 1 and rest(r) == 0:
                rest = rest.exact_div(lin)
                m += 1
            if m:
                out.append((r, m))
    out.sort(key=lambda t: t[0])
    return out, rest


def _det_q(m):
    """Determinant of a square matrix over Q by Gaussian elimination."""
    n = len(m)
    a = [list(r) for r in m]
    det = ONE
    for c in range(n):
        piv = None
        for i in range(c, n):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            return ZERO
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        pv = a[c][c]
        det *= pv
        inv = ONE / pv
        for i in range(c + 1, n):
            f = a[i][c]
            if f:
                f *= inv
                ri, rc = a[i], a[c]
                for j in range(c + 1, n):
                    ri[j] -= f * rc[j]
    return det


def interpolate(values):
    """Polynomial through (0, v0), (1, v1), ... by Newton's forward differences."""
    n = len(values)
    diffs = [Q(v) for v in values]
    newton = []
    for k in range(n):
        newton.append(diffs[0])
        diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
    # sum_k newton[k] * binom(x, k)
    result = UPoly()
    basis = UPoly.const(1)
    fact = ONE
    for k in range(n):
        if k:
            basis = basis * UPoly((-(k - 1), 1))
            fact *= k
        if newton[k]:
            result = result + basis * (newton[k] / fact)
    return result


def poly_det(matrix):
    """Determinant of a square matrix of :class:`UPoly` by evaluation and interpolation."""
    n = len(matrix)
    if n == 0:
        return UPoly.const(1)
    rowdeg = sum(max((e.degree for e in row if e), default=0) for row in matrix)
    coldeg = sum(max((matrix[i][j].degree for i in range(n) if matrix[i][j]), default=0) for j in range(n))
    bound = max(min(rowdeg, coldeg), 0)
    vals = []
    for x0 in range(bound + 1):
        xq = Q(x0)
        vals.append(_det_q([[e(xq) if e else ZERO for e in row] for row in matrix]))
    return interpolate(vals)


def poly_lcm_list(polys):
    out = UPoly.const(1)
    for p in polys:
        if p.degree > 0:
            out = (out * p).exact_div(poly_gcd(out, p))
    return out.monic()


def gcd_list(polys):
    g = UPoly()
    for p in polys:
        if p:
            g = p.monic() if not g else poly_gcd(g, p)
            if g.degree == 0:
                return UPoly.const(1)
    return g
