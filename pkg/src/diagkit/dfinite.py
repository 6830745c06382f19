"""Linear differential operators with polynomial coefficients.

An operator is stored in D-form, ``L = sum_k p_k(x) D^k`` with ``D = d/dx``.
The θ-form ``x^s L = sum_i x^i P_i(θ)`` (``θ = x d/dx``, ``P_0 != 0``) is
derived on demand and drives every recurrence in this module.
"""

import random
from dataclasses import dataclass, field

from .expr import _Parser, expand
from .fp import (crt_pair, large_primes, nullspace_mod_p, rational_reconstruct, reduce_rational,
                 smallest_kernel_vector)
from .kernels import rank_mod_p, rref_mod_p
from .poly import RatFunc, UPoly
from .polyalg import gcd_list, poly_det, poly_lcm_list, rational_roots, squarefree_part
from .rational import ONE, Q, ZERO, binomial, qstr
from .series import USeries


class OperatorError(ValueError):
    pass


def _stirling2(n):
    """Rows S(j, k) for j <= n."""
    table = [[1]]
    for j in range(1, n + 1):
        prev = table[-1]
        row = [0] * (j + 1)
        for k in range(1, j + 1):
            row[k] = (prev[k - 1] if k - 1 < len(prev) else 0) + k * (prev[k] if k < len(prev) else 0)
        table.append(row)
    return table


def _falling(k):
    """θ(θ-1)...(θ-k+1) as a polynomial in θ."""
    p = UPoly.const(1)
    for i in range(k):
        p = p * UPoly((-i, 1))
    return p


def taylor_shift(p, a):
    """Coefficients of ``p(a + t)`` in ``t``."""
    c = list(p.coeffs)
    n = len(c)
    a = Q(a)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            c[j] += a * c[j + 1]
    return c


class LinDiffOp:
    """``sum_k coeffs[k](x) * D^k``."""

    __slots__ = ("coeffs", "_theta")

    def __init__(self, coeffs):
        cs = [c if isinstance(c, UPoly) else (UPoly(c) if isinstance(c, (list, tuple)) else UPoly.const(c))
              for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        if not cs:
            raise OperatorError("zero operator")
        self.coeffs = tuple(cs)
        self._theta = None

    # --- constructors ----------------------------------------------------
    @classmethod
    def from_theta(cls, parts):
        """Build from ``sum_i x^i P_i(θ)``; ``parts`` maps ``i`` to a θ-polynomial."""
        items = parts.items() if isinstance(parts, dict) else enumerate(parts)
        items = [(i, P if isinstance(P, UPoly) else UPoly(P)) for i, P in items]
        maxj = max((P.degree for _, P in items), default=0)
        S = _stirling2(max(maxj, 0))
        out = {}
        for i, P in items:
            for j, c in enumerate(P.coeffs):
                if not c:
                    continue
                for k in range(j + 1):
                    s = S[j][k]
                    if s:
                        key = (k, i + k)
                        out[key] = out.get(key, ZERO) + c * s
        order = max((k for k, _ in out), default=0)
        coeffs = []
        for k in range(order + 1):
            deg = max((d for kk, d in out if kk == k), default=-1)
            cs = [ZERO] * (deg + 1)
            for (kk, d), c in out.items():
                if kk == k:
                    cs[d] += c
            coeffs.append(UPoly(cs))
        return cls(coeffs)

    @classmethod
    def from_theta_text(cls, text):
        """Parse a normal-ordered polynomial in ``x`` and ``t`` (θ), x written to the left."""
        return cls.from_theta(_text_to_parts(text, "t"))

    @classmethod
    def from_d_text(cls, text):
        """Parse a normal-ordered polynomial in ``x`` and ``D``."""
        parts = _text_to_parts(text, "D", by_second=True)
        return cls([parts.get(k, UPoly()) for k in range(max(parts) + 1)])

    # --- structure -------------------------------------------------------
    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def degree(self):
        return max(c.degree for c in self.coeffs)

    def lc(self):
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, LinDiffOp) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "LinDiffOp(order=%d, %s)" % (self.order, self.pretty())

    def content(self):
        """Polynomial content: monic gcd of the coefficients times their rational content."""
        g = gcd_list(self.coeffs)
        rest = [c.exact_div(g) for c in self.coeffs]
        return g, _rational_content(rest)

    def normalized(self):
        """Divide by the polynomial gcd and rational content; leading term of the
        leading coefficient made positive."""
        g = gcd_list(self.coeffs)
        cs = [c.exact_div(g) for c in self.coeffs] if g.degree > 0 else list(self.coeffs)
        r = _rational_content(cs)
        if cs[-1].lc() < 0:
            r = -r
        return LinDiffOp([c * (ONE / r) for c in cs])

    def equivalent(self, other):
        return self.normalized() == other.normalized()

    def pretty(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            d = "" if k == 0 else ("D" if k == 1 else "D^%d" % k)
            parts.append("(%s)%s" % (c.pretty(), ("*" + d) if d else ""))
        return " + ".join(parts)

    def pretty_theta(self):
        s, parts = self.theta_form()
        out = []
        for i, P in enumerate(parts):
            if not P:
                continue
            xs = "" if i == 0 else ("x*" if i == 1 else "x^%d*" % i)
            out.append("%s(%s)" % (xs, P.pretty("t")))
        head = "" if s == 0 else ("x^%d * L = " % s)
        return head + " + ".join(out)

    def to_json(self):
        return {"coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, dict) and "coeffs" in data:
            return cls([UPoly.from_json(c) for c in data["coeffs"]])
        if isinstance(data, dict) and isinstance(data.get("theta"), dict):
            return cls.from_theta({int(i): UPoly.from_json(P) for i, P in data["theta"].items()})
        if isinstance(data, dict) and "theta_text" in data:
            return cls.from_theta_text(data["theta_text"])
        if isinstance(data, dict) and "d_text" in data:
            return cls.from_d_text(data["d_text"])
        if isinstance(data, dict):
            raise OperatorError("unrecognised operator JSON")
        return cls([UPoly.from_json(c) for c in data])

    # --- θ-form ----------------------------------------------------------
    def theta_form(self):
        """``(s, [P_0, P_1, ...])`` with ``x^s L = sum_i x^i P_i(θ)`` and ``P_0 != 0``."""
        if self._theta is not None:
            return self._theta
        m = max(k - c.valuation() for k, c in enumerate(self.coeffs) if c)
        acc = {}
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            ff = _falling(k)
            for a, ca in enumerate(c.coeffs):
                if ca:
                    i = a + m - k
                    acc[i] = acc.get(i, UPoly()) + ff * ca
        low = min(i for i, P in acc.items() if P)
        top = max(acc)
        parts = [acc.get(i, UPoly()) for i in range(low, top + 1)]
        self._theta = (m - low, parts)
        return self._theta

    def indicial_polynomial(self):
        return self.theta_form()[1][0]

    # --- action ----------------------------------------------------------
    def apply(self, f):
        """``sum_k p_k f^(k)``; the truncation drops by the order."""
        t = f.trunc - self.order
        out = USeries.zero(t)
        d = f
        for k, c in enumerate(self.coeffs):
            if k:
                d = d.derivative()
            if c:
                out = out + (USeries.from_poly(c, t) * d.truncate(t))
        return out

    def apply_theta(self, f):
        """``x^s L f`` computed in θ-form, keeping the truncation of ``f``."""
        s, parts = self.theta_form()
        t = f.trunc
        out = [ZERO] * (t + 1)
        a = f.coeffs
        for i, P in enumerate(parts):
            if not P:
                continue
            for n in range(t + 1 - i):
                if a[n]:
                    out[n + i] += P(n) * a[n]
        return USeries(out, t)

    def annihilates(self, f):
        return self.apply_theta(f).is_zero()

    def __call__(self, f):
        if isinstance(f, RatFunc) or isinstance(f, UPoly):
            return apply_to_ratfunc(self, f)
        return self.apply(f)


def _rational_content(polys):
    from functools import reduce
    from math import gcd

    nums, dens = [], []
    for p in polys:
        for c in p.coeffs:
            if c:
                nums.append(int(c.numerator))
                dens.append(int(c.denominator))
    if not nums:
        return ONE
    g = reduce(gcd, nums)
    lcm = reduce(lambda a, b: a * b // gcd(a, b), dens)
    return Q(abs(g), lcm)


def _text_to_parts(text, second, by_second=False):
    names = {"x": 0, second: 1}
    if second == "t":
        names["theta"] = 1
    parser = _Parser(text, names)
    tree = parser.parse()
    ms = expand(tree, (64, 64))
    parts = {}
    for (i, j), c in ms.items():
        key, deg = (j, i) if by_second else (i, j)
        cs = list(parts.get(key, UPoly()).coeffs)
        cs.extend([ZERO] * (deg + 1 - len(cs)))
        cs[deg] += c
        parts[key] = UPoly(cs)
    return parts


# --- rational-coefficient operator arithmetic ---------------------------------

class _ROp:
    """Operator with :class:`RatFunc` coefficients (internal)."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = [x if isinstance(x, RatFunc) else RatFunc(x) for x in coeffs]

    @classmethod
    def from_op(cls, L):
        return cls([RatFunc(p) for p in L.coeffs])

    def __add__(self, other):
        n = max(len(self.c), len(other.c))
        z = RatFunc(0)
        return _ROp([(self.c[i] if i < len(self.c) else z) + (other.c[i] if i < len(other.c) else z)
                     for i in range(n)])

    def lmul(self, f):
        return _ROp([f * x for x in self.c])

    def dcompose(self):
        """``D o self``."""
        out = [RatFunc(0)] * (len(self.c) + 1)
        for j, a in enumerate(self.c):
            if a:
                out[j] = out[j] + a.derivative()
                out[j + 1] = out[j + 1] + a
        return _ROp(out)

    def to_poly_op(self):
        dens = [x.den for x in self.c if x]
        m = poly_lcm_list(dens)
        cs = [(x.num * m.exact_div(x.den)) if x else UPoly() for x in self.c]
        return LinDiffOp(cs).normalized()


def apply_to_ratfunc(L, f):
    f = f if isinstance(f, RatFunc) else RatFunc(f)
    out = RatFunc(0)
    d = f
    for k, c in enumerate(L.coeffs):
        if k:
            d = d.derivative()
        if c:
            out = out + d * RatFunc(c)
    return out


def compose(L1, L2):
    """Operator product ``L1 o L2``."""
    acc = _ROp([0])
    power = _ROp.from_op(L2)
    for k, c in enumerate(L1.coeffs):
        if k:
            power = power.dcompose()
        if c:
            acc = acc + power.lmul(RatFunc(c))
    cs = [x.num for x in acc.c]  # polynomial inputs stay polynomial
    return LinDiffOp(cs)


def adjoint(L):
    """``sum_k (-D)^k o p_k``."""
    n = L.order
    out = [UPoly() for _ in range(n + 1)]
    for k, p in enumerate(L.coeffs):
        sign = -1 if k % 2 else 1
        d = p
        for l in range(k + 1):
            if l:
                d = d.derivative()
            if d:
                out[k - l] = out[k - l] + d * (sign * binomial(k, l))
    return LinDiffOp(out)


def pullback_op(L, p):
    """Operator whose solutions are ``y(p(x))`` for solutions ``y`` of ``L``."""
    p = p if isinstance(p, RatFunc) else RatFunc(p)
    dp = p.derivative()
    if not dp:
        raise OperatorError("constant pullback")
    inv = dp.inverse()
    acc = _ROp([0])
    power = _ROp([1])
    for k, c in enumerate(L.coeffs):
        if k:
            power = power.dcompose().lmul(inv)
        if c:
            acc = acc + power.lmul(RatFunc(c).compose(p))
    return acc.to_poly_op()


def conjugate_op(L, r):
    """Operator whose solutions are ``ρ·y`` where ``ρ'/ρ = r``."""
    r = r if isinstance(r, RatFunc) else RatFunc(r)
    acc = _ROp([0])
    power = _ROp([1])
    for k, c in enumerate(L.coeffs):
        if k:
            # (D - r) o power
            power = power.dcompose() + power.lmul(-r)
        if c:
            acc = acc + power.lmul(RatFunc(c))
    return acc.to_poly_op()


def gauge_exponent(alpha):
    """``r = α/x``: conjugation by ``x^α``."""
    return RatFunc(UPoly.const(alpha), UPoly.x())


# --- indicial data --------------------------------------------------------------

def indicial_exponents(L):
    """Rational exponents at 0 with multiplicity and the leftover factor.

    Returns ``(exponents, rest)``: ``exponents`` is a sorted list with
    repetitions, ``rest`` the indicial factor without rational roots."""
    s, parts = L.theta_form()
    roots, rest = rational_roots(parts[0])
    exps = []
    for r, m in roots:
        exps.extend([r] * m)
    return exps, rest


def is_mum(L, strict=False):
    """Single exponent of full multiplicity; ``strict`` additionally demands it be 0."""
    exps, rest = indicial_exponents(L)
    if rest.degree > 0 or len(exps) != L.order:
        return False
    if len(set(exps)) != 1:
        return False
    return exps[0] == 0 if strict else True


# --- series solutions ----------------------------------------------------------

def series_solution(L, init, trunc):
    """Analytic solution with prescribed leading coefficients ``init``."""
    init = [Q(c) for c in (init if isinstance(init, (list, tuple)) else [init])]
    s, parts = L.theta_form()
    P0 = parts[0]
    a = [ZERO] * (trunc + 1)
    for n in range(trunc + 1):
        rhs = ZERO
        for i in range(1, min(len(parts), n + 1)):
            Pi = parts[i]
            if Pi and a[n - i]:
                rhs -= Pi(n - i) * a[n - i]
        lead = P0(n)
        if lead == 0:
            if rhs != 0:
                raise OperatorError("resonance at index %d: no analytic solution with this data" % n)
            a[n] = init[n] if n < len(init) else ZERO
        else:
            a[n] = rhs / lead
            if n < len(init) and init[n] != a[n]:
                raise OperatorError("initial coefficient %d inconsistent with the recurrence" % n)
    if not any(a):
        raise OperatorError("initial data produced the zero series")
    return USeries(a, trunc)


def analytic_solution(L, trunc):
    """Normalised analytic solution (value 1 at 0) when 0 is an exponent."""
    return series_solution(L, [1], trunc)


@dataclass
class FrobeniusSolution:
    """``x^rho * sum_j (log x)^j / j! * logs[j]``."""

    rho: object
    logs: list

    @property
    def log_degree(self):
        d = 0
        for j, g in enumerate(self.logs):
            if not g.is_zero():
                d = j
        return d


def _apply_poly_N(coeffs, vec):
    """``(sum_l coeffs[l] N^l) vec`` for a vector of parameter rows."""
    K = len(vec)
    width = len(vec[0]) if vec else 0
    out = [[ZERO] * width for _ in range(K)]
    for j in range(K):
        row = out[j]
        for l, c in enumerate(coeffs):
            if not c or j + l >= K:
                continue
            src = vec[j + l]
            for t in range(width):
                if src[t]:
                    row[t] += c * src[t]
    return out


def frobenius_class(L, rho, K, trunc):
    """Parametric Frobenius recurrence for the exponent class ``rho + Z``.

    Returns ``(vectors, constraints, nparams)``: ``vectors[n][j][t]`` is the
    coefficient of parameter ``t`` in the log-level ``j`` coefficient of
    ``x^(rho+n)``; ``constraints`` are linear forms that must vanish."""
    s, parts = L.theta_form()
    P0 = parts[0]
    nparams = K
    used = 0
    vecs = []
    constraints = []
    for n in range(trunc + 1):
        rhs = [[ZERO] * nparams for _ in range(K)]
        for i in range(1, min(len(parts), n + 1)):
            Pi = parts[i]
            if not Pi:
                continue
            tc = taylor_shift(Pi, rho + n - i)
            contrib = _apply_poly_N(tc, vecs[n - i])
            for j in range(K):
                for t in range(nparams):
                    if contrib[j][t]:
                        rhs[j][t] -= contrib[j][t]
        c = taylor_shift(P0, rho + n)
        mu = 0
        while mu < len(c) and c[mu] == 0:
            mu += 1
        U = c[mu:]
        w = [[ZERO] * nparams for _ in range(K)]
        for j in range(K):
            if j >= mu:
                w[j] = list(rhs[j - mu])
        for j in range(K - mu, K):
            if any(rhs[j]):
                constraints.append(list(rhs[j]))
        for j in range(min(mu, K)):
            if used >= nparams:
                raise OperatorError("more free parameters than the class multiplicity")
            w[j][used] = ONE
            used += 1
        # back-substitution for U v = w (upper triangular Toeplitz)
        v = [[ZERO] * nparams for _ in range(K)]
        inv = ONE / U[0]
        for j in range(K - 1, -1, -1):
            acc = list(w[j])
            for l in range(1, len(U)):
                if j + l < K and U[l]:
                    src = v[j + l]
                    for t in range(nparams):
                        if src[t]:
                            acc[t] -= U[l] * src[t]
            v[j] = [x * inv for x in acc]
        vecs.append(v)
    return vecs, constraints, used


def frobenius_solutions(L, trunc):
    """A basis of local solutions at 0 for every rational exponent class."""
    exps, rest = indicial_exponents(L)
    classes = {}
    for e in exps:
        key = e - (e.numerator // e.denominator)
        classes.setdefault(key, []).append(e)
    sols = []
    for key in sorted(classes):
        members = classes[key]
        rho = min(members)
        K = len(members)
        span = int(max(members) - rho)
        vecs, constraints, nparams = frobenius_class(L, rho, K, trunc + span)
        basis = _solve_constraints(constraints, nparams)
        for b in basis:
            logs = []
            for j in range(K):
                cs = [sum((vecs[n][j][t] * b[t] for t in range(nparams) if b[t]), ZERO)
                      for n in range(trunc + 1)]
                logs.append(USeries(cs, trunc))
            while len(logs) > 1 and logs[-1].is_zero():
                logs.pop()
            sols.append(FrobeniusSolution(rho, logs))
    sols.sort(key=lambda s: (s.log_degree, s.rho))
    return sols


def _solve_constraints(rows, n):
    """Basis of the rational nullspace of ``rows`` (exact)."""
    if not rows:
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for f in range(n):
        if f in pivots:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for i, c in enumerate(pivots):
            v[c] = -m[i][f]
        basis.append(v)
    return basis


def rational_nullspace(rows, n):
    return _solve_constraints(rows, n)


# --- special operators -----------------------------------------------------------

def hypergeometric_op(upper, lower, scale=1):
    """Operator of ``pFq(upper; lower; scale*x)`` (the implicit ``n!`` excluded from ``lower``)."""
    theta = UPoly((0, 1))
    left = theta
    for b in lower:
        left = left * UPoly((Q(b) - 1, 1))
    right = UPoly.const(-Q(scale))
    for a in upper:
        right = right * UPoly((Q(a), 1))
    return LinDiffOp.from_theta({0: left, 1: right})


def pfq_series(upper, lower, scale, trunc):
    """Series of ``pFq`` via the term ratio."""
    scale = Q(scale)
    upper = [Q(a) for a in upper]
    lower = [Q(b) for b in lower]
    for b in lower:
        if b <= 0 and b.denominator == 1:
            raise OperatorError("lower parameter %s is a nonpositive integer" % qstr(b))
    out = [ONE]
    t = ONE
    for n in range(trunc):
        num = scale
        for a in upper:
            num *= a + n
        den = Q(n + 1)
        for b in lower:
            den *= b + n
        t = t * num / den
        out.append(t)
    return USeries(out, trunc)


def heun_op(a, qq, alpha, beta, gamma, delta, scale=1):
    """Operator of ``HeunG(a, q, α, β, γ, δ; scale*x)``."""
    a, qq, alpha, beta, gamma, delta, s = (Q(v) for v in (a, qq, alpha, beta, gamma, delta, scale))
    eps = alpha + beta + 1 - gamma - delta
    z = UPoly((0, s))
    p2 = z * (z - 1) * (z - a)
    p1 = ((z - 1) * (z - a) * gamma + z * (z - a) * delta + z * (z - 1) * eps)
    p0 = z * (alpha * beta) - qq
    return LinDiffOp([p0, p1 * (ONE / s), p2 * (ONE / (s * s))])


def heun_series(a, qq, alpha, beta, gamma, delta, scale, trunc):
    """HeunG series from its three-term recurrence."""
    a, qq, alpha, beta, gamma, delta, s = (Q(v) for v in (a, qq, alpha, beta, gamma, delta, scale))
    eps = alpha + beta + 1 - gamma - delta
    c = [ONE]
    if trunc >= 1:
        c.append(qq / (a * gamma))
    for n in range(1, trunc):
        R = a * (n + 1) * (n + gamma)
        Qn = n * ((n - 1 + gamma) * (1 + a) + a * delta + eps) + qq
        P = (n - 1 + alpha) * (n - 1 + beta)
        c.append((Qn * c[n] - P * c[n - 1]) / R)
    return USeries(c[: trunc + 1], trunc).scale_var(s)


# --- guessing ---------------------------------------------------------------------

@dataclass
class GuessReport:
    operator: object
    order: int
    degree: int
    terms_used: int
    guard: int
    theta_parts: list = field(default_factory=list)

    @property
    def found(self):
        return self.operator is not None


def _guess_rows(coeffs_mod, r, d, nrows, p):
    rows = []
    for n in range(nrows):
        row = []
        for i in range(d + 1):
            m = n - i
            a = coeffs_mod[m] if m >= 0 else 0
            pw = 1
            base = m % p
            for j in range(r + 1):
                row.append(a * pw % p if a else 0)
                pw = pw * base % p
        rows.append(row)
    return rows


def _guess_at(f, r, d, used, p):
    cm = [reduce_rational(c, p) for c in f.coeffs]
    rows = _guess_rows(cm, r, d, f.trunc + 1, p)
    ncols = (d + 1) * (r + 1)
    basis = nullspace_mod_p(rows[:used], ncols, p)
    if not basis:
        return None
    v = smallest_kernel_vector(basis, p)
    for row in rows[used:]:
        if sum(a * b for a, b in zip(row, v)) % p:
            return None
    return v


def _lift_guess(f, r, d, used, primes_limit=60):
    residues, modulus = None, 1
    for p in large_primes(primes_limit):
        try:
            v = _guess_at(f, r, d, used, p)
        except ZeroDivisionError:
            continue
        if v is None:
            return None
        if residues is None:
            residues, modulus = v, p
        else:
            residues = [crt_pair(a, modulus, b, p)[0] for a, b in zip(residues, v)]
            modulus *= p
        cand = [rational_reconstruct(x, modulus) for x in residues]
        if any(c is None for c in cand):
            continue
        parts = {}
        for i in range(d + 1):
            parts[i] = UPoly(cand[i * (r + 1):(i + 1) * (r + 1)])
        if not any(parts.values()) or not parts[0]:
            if not any(parts.values()):
                continue
        try:
            L = LinDiffOp.from_theta(parts)
        except OperatorError:
            continue
        if L.annihilates(f):
            return L, [parts[i] for i in range(d + 1)]
    return None


def guess_ode(f, max_order, max_degree, guard=None, min_guard=10):
    """Minimal (order, then θ-degree) operator annihilating ``f`` with guard verification."""
    total = f.trunc + 1
    g = max(min_guard, total // 5) if guard is None else guard
    for r in range(1, max_order + 1):
        for d in range(0, max_degree + 1):
            used = (r + 1) * (d + 2)
            if used + g > total:
                continue
            p = large_primes(1)[0]
            try:
                v = _guess_at(f, r, d, used, p)
            except ZeroDivisionError:
                v = True
            if v is None:
                continue
            res = _lift_guess(f, r, d, used)
            if res is None:
                continue
            L, parts = res
            if L.order != r:
                continue
            return GuessReport(L.normalized(), r, d, used, total - used, parts)
    needed = (2) * (2) + g
    if total < needed:
        raise OperatorError("insufficient terms: %d available" % total)
    return GuessReport(None, 0, 0, total, g)


def hadamard_op(L1, L2, max_order=6, max_degree=8, trunc=None):
    from .diagonal import hadamard

    if trunc is None:
        trunc = (max_order + 1) * (max_degree + 2) + 12
    f = analytic_solution(L1, trunc)
    g = analytic_solution(L2, trunc)
    return guess_ode(hadamard(f, g), max_order, max_degree)


# --- exterior and symmetric squares ----------------------------------------------

def _square_basis(n, kind):
    if kind == "ext":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    return [(i, j) for i in range(n) for j in range(i, n)]


def _square_module(L, kind):
    """Polynomial derivation data: returns (basis, index, pn, image) where
    ``pn * d(b)`` equals ``sum image[b][c] * c`` with polynomial entries."""
    n = L.order
    pn = L.lc()
    basis = _square_basis(n, kind)
    index = {b: k for k, b in enumerate(basis)}

    def add(acc, i, j, coef):
        # add coef * (y^(i) ∘ y^(j)) reducing y^(n)
        if i == n or j == n:
            if i == n and j == n:
                raise AssertionError
            if i == n:
                i, j = j, i
                sgn = -1 if kind == "ext" else 1
            else:
                sgn = 1
            for k in range(n):
                pk = L.coeffs[k]
                if pk:
                    add(acc, i, k, -pk * coef * sgn)
            return
        if kind == "ext":
            if i == j:
                return
            if i > j:
                i, j = j, i
                coef = -coef
        elif i > j:
            i, j = j, i
        key = index[(i, j)]
        acc[key] = acc.get(key, UPoly()) + coef

    image = []
    for (i, j) in basis:
        acc = {}
        # pn * d(y^i ∘ y^j) = pn*(y^(i+1) ∘ y^j + y^i ∘ y^(j+1)); reduction of
        # y^(n) contributes -p_k/pn, so scaling by pn keeps polynomials
        if i + 1 < n:
            add(acc, i + 1, j, pn)
        else:
            add(acc, i + 1, j, UPoly.const(1))
        if j + 1 < n:
            add(acc, i, j + 1, pn)
        else:
            add(acc, i, j + 1, UPoly.const(1))
        image.append(acc)
    return basis, index, pn, image


def _closure_vectors(L, kind, count):
    basis, index, pn, image = _square_module(L, kind)
    N = len(basis)
    dpn = pn.derivative()
    v = [UPoly() for _ in range(N)]
    v[0] = UPoly.const(1)
    out = [v]
    for m in range(count):
        nxt = [pn * c.derivative() - dpn * c * m for c in v]
        for b, c in enumerate(v):
            if c:
                for k, e in image[b].items():
                    nxt[k] = nxt[k] + c * e
        v = nxt
        out.append(v)
    return out, N, pn


def _eval_mod(poly, x0, p):
    acc = 0
    for c in reversed(poly.coeffs):
        acc = (acc * x0 + reduce_rational(c, p)) % p
    return acc


def _square_op(L, kind, seed=0):
    vecs, N, pn = _closure_vectors(L, kind, len(_square_basis(L.order, kind)))
    rng = random.Random(seed)
    p = large_primes(2)[1]
    points = [rng.randrange(1, p) for _ in range(2)]
    order = None
    for k in range(1, len(vecs)):
        ranks = []
        for x0 in points:
            cols = [[_eval_mod(c, x0, p) for c in vecs[m]] for m in range(k + 1)]
            ranks.append(rank_mod_p(cols, p))
        if max(ranks) < k + 1:
            order = k
            break
    if order is None:
        order = len(vecs) - 1
    r = order
    x0 = points[0]
    # rows with a nonzero r x r minor at the sample point
    mat = [[_eval_mod(vecs[m][row], x0, p) for m in range(r)] for row in range(N)]
    cols_t = [[mat[row][m] for row in range(N)] for m in range(r)]
    _, piv_rows = rref_mod_p(cols_t, p)
    if len(piv_rows) < r:
        x0 = points[1]
        mat = [[_eval_mod(vecs[m][row], x0, p) for m in range(r)] for row in range(N)]
        cols_t = [[mat[row][m] for row in range(N)] for m in range(r)]
        _, piv_rows = rref_mod_p(cols_t, p)
    rows = piv_rows[:r]
    coeffs = []
    for m in range(r + 1):
        minor = [[vecs[c][row] for c in range(r + 1) if c != m] for row in rows]
        b = poly_det(minor) * (-1 if m % 2 else 1)
        coeffs.append(b * pn ** m)
    return LinDiffOp(coeffs).normalized()


def exterior_square(L, seed=0):
    if L.order < 2:
        raise OperatorError("exterior square needs order >= 2")
    return _square_op(L, "ext", seed)


def symmetric_square(L, seed=0):
    if L.order < 1:
        raise OperatorError("symmetric square needs order >= 1")
    return _square_op(L, "sym", seed)


def exterior_square_order(L, seed=0):
    """Order of the exterior square from modular ranks only (no operator)."""
    vecs, N, pn = _closure_vectors(L, "ext", len(_square_basis(L.order, "ext")))
    rng = random.Random(seed)
    p = large_primes(2)[1]
    points = [rng.randrange(1, p) for _ in range(2)]
    for k in range(1, len(vecs)):
        ranks = [rank_mod_p([[_eval_mod(c, x0, p) for c in vecs[m]] for m in range(k + 1)], p)
                 for x0 in points]
        if max(ranks) < k + 1:
            return k
    return len(vecs) - 1


# --- rational solutions -----------------------------------------------------------

def check_rational_solution(L, candidate):
    return apply_to_ratfunc(L, candidate).is_zero()


def bounded_rational_solutions(L, bound):
    """Basis of rational solutions ``N/D`` with ``D`` a power (<= bound) of the
    squarefree leading coefficient and ``deg N <= bound + deg D``."""
    sq = squarefree_part(L.lc())
    found = []
    for k in range(bound + 1):
        D = sq ** k
        dmax = bound + D.degree
        # L(x^i / D) for i = 0..dmax, over a common denominator
        imgs = [apply_to_ratfunc(L, RatFunc(UPoly.monomial(i), D)) for i in range(dmax + 1)]
        den = poly_lcm_list([im.den for im in imgs if im])
        cols = []
        for im in imgs:
            cols.append((im.num * den.exact_div(im.den)) if im else UPoly())
        height = max((c.degree for c in cols if c), default=-1) + 1
        rows = [[c[h] for c in cols] for h in range(height)]
        basis = _solve_constraints(rows, dmax + 1)
        if basis:
            for b in basis:
                found.append(RatFunc(UPoly(b), D))
            break
    return found


def atkin_identity(L, A, e):
    """``x^e L(x) = L(1/(A x)) x^e`` as operators, up to content and left factors of ``x``."""
    A, e = Q(A), Q(e)
    X = UPoly.x()
    lhs = pullback_op(L, RatFunc(UPoly.const(1), X * A))
    rhs = conjugate_op(L, RatFunc(UPoly.const(e), X))
    return lhs.normalized() == rhs.normalized()


apply_op = LinDiffOp.apply
pFq_series = pfq_series
