"""Diagonals of multivariate expansions and the products compatible with them."""

from dataclasses import dataclass, field

from .expr import (Add, Const, Div, ExpansionError, Mul, Neg, Pow, RatExpr, Var, expand, from_mpoly,
                   parse_expr, remap)
from .mseries import MSeries
from .poly import MPoly, UPoly
from .rational import ONE, Q, ZERO, binomial, q, qstr
from .series import USeries


class DiagonalError(ValueError):
    pass


# --- the engine -------------------------------------------------------------------

def _factorize(node, exp, out, const):
    """Flatten products/quotients/integer powers into ``(subtree, exponent)`` pairs."""
    if isinstance(node, Const):
        if exp != 1 and node.value == 0 and exp < 0:
            raise ExpansionError("division by the constant zero")
        const[0] *= node.value ** int(exp) if exp.denominator == 1 else _const_power(node.value, exp)
    elif isinstance(node, Neg):
        if exp.denominator != 1:
            out.append((node, exp))
        else:
            const[0] *= (-1) ** int(exp)
            _factorize(node.arg, exp, out, const)
    elif isinstance(node, Mul) and exp.denominator == 1:
        for f in node.factors:
            _factorize(f, exp, out, const)
    elif isinstance(node, Div) and exp.denominator == 1:
        _factorize(node.num, exp, out, const)
        _factorize(node.den, -exp, out, const)
    elif isinstance(node, Pow) and (exp * node.exp).denominator == 1 and node.exp.denominator == 1:
        _factorize(node.base, exp * node.exp, out, const)
    else:
        out.append((node, exp))


def _const_power(c, e):
    from .rational import rational_power

    v = rational_power(Q(c), e)
    if v is None:
        raise ExpansionError("constant %s has no rational power %s" % (qstr(c), qstr(e)))
    return v


def _factor_tables(expr, nvars, T):
    factors, const = [], [ONE]
    _factorize(expr, ONE, factors, const)
    merged = {}
    order = []
    for node, e in factors:
        key = node.to_str()
        if key in merged:
            merged[key][1] += e
        else:
            merged[key] = [node, e]
            order.append(key)
    tables = []
    for key in order:
        node, e = merged[key]
        if e == 0:
            continue
        vs = sorted(node.variables())
        if any(v >= nvars for v in vs):
            raise ExpansionError("expression uses z%d beyond the %d declared variables" % (max(vs), nvars))
        if not vs:
            const[0] *= _const_power(_const_value(node), e)
            continue
        local = remap(node, {v: i for i, v in enumerate(vs)})
        base = local if e == 1 else Pow(local, e)
        ms = expand(base, (T,) * len(vs))
        tables.append((tuple(vs), {ex: c for ex, c in ms.items()}))
    return const[0], tables


def _const_value(node):
    ms = expand(node, (0,))
    return ms.constant_term()


def _eliminate(tables, nvars, T):
    """Sum over matching exponent tuples: returns ``{m: coefficient}``."""
    used = set()
    for vs, _ in tables:
        used.update(vs)
    force_zero = len(used) < nvars
    if not tables:
        return {0: ONE}
    remaining = list(tables)
    # state key: (m or -1, tuple of (var, exp) for open variables, sorted)
    states = {(-1, ()): ONE}
    open_vars = ()
    while remaining:
        # choose the factor giving the smallest open set, then most overlap
        best = None
        for idx, (vs, tab) in enumerate(remaining):
            rest_vars = set()
            for j, (ws, _) in enumerate(remaining):
                if j != idx:
                    rest_vars.update(ws)
            new_open = (set(open_vars) | set(vs)) & rest_vars
            score = (len(new_open), -len(set(vs) & set(open_vars)), len(tab))
            if best is None or score < best[0]:
                best = (score, idx, new_open)
        _, idx, new_open = best
        vs, tab = remaining.pop(idx)
        all_vars = sorted(set(open_vars) | set(vs))
        new_open = tuple(sorted(new_open))
        pos_open = {v: i for i, v in enumerate(open_vars)}
        pos_f = {v: i for i, v in enumerate(vs)}
        out = {}
        titems = list(tab.items())
        for (m, oexp), c in states.items():
            for fexp, d in titems:
                mm = m
                ok = True
                newkey = []
                for v in all_vars:
                    e = 0
                    if v in pos_open:
                        e += oexp[pos_open[v]]
                    if v in pos_f:
                        e += fexp[pos_f[v]]
                    if e > T or (mm >= 0 and e > mm):
                        ok = False
                        break
                    if v in new_open:
                        newkey.append(e)
                    else:
                        if mm < 0:
                            mm = e
                        elif e != mm:
                            ok = False
                            break
                if not ok:
                    continue
                if mm >= 0 and any(e > mm for e in newkey):
                    continue
                key = (mm, tuple(newkey))
                out[key] = out.get(key, ZERO) + c * d
        states = {k: v for k, v in out.items() if v}
        open_vars = new_open
    result = {}
    for (m, _), c in states.items():
        m = max(m, 0)
        if force_zero and m:
            continue
        result[m] = result.get(m, ZERO) + c
    return result


def diagonal(expr, nvars=None, T=10):
    """Coefficients ``F_{m,...,m}`` for ``m <= T`` of the expansion of ``expr``."""
    if isinstance(expr, str):
        expr = parse_expr(expr, nvars)
    if nvars is None:
        nvars = max(expr.variables(), default=-1) + 1
    if nvars < 1:
        raise DiagonalError("at least one variable is required")
    terms = expr.terms if isinstance(expr, Add) else [expr]
    total = [ZERO] * (T + 1)
    for t in terms:
        const, tables = _factor_tables(t, nvars, T)
        if not const:
            continue
        for m, c in _eliminate(tables, nvars, T).items():
            if m <= T:
                total[m] += const * c
    return USeries(total, T)


def diagonal_bruteforce(expr, nvars, T):
    """Reference implementation: full expansion, then extraction."""
    if isinstance(expr, str):
        expr = parse_expr(expr, nvars)
    return expand(expr, (T,) * nvars).diagonal(T)


# --- products ----------------------------------------------------------------------

def hadamard(f, g):
    t = min(f.trunc, g.trunc)
    return USeries([f[n] * g[n] for n in range(t + 1)], t)


def hurwitz(f, g):
    t = min(f.trunc, g.trunc)
    out = [ZERO] * (t + 1)
    for n in range(t + 1):
        if f[n]:
            for m in range(t + 1 - n):
                if g[m]:
                    out[n + m] += binomial(n + m, n) * f[n] * g[m]
    return USeries(out, t)


def general_product(f, g, R):
    """``sum p(n, m) a_n b_m x^(n+m)`` with ``p`` the Taylor coefficients of ``R(z0, z1)``."""
    if isinstance(R, str):
        R = parse_expr(R, 2)
    t = min(f.trunc, g.trunc)
    p = expand(R, (t, t))
    out = [ZERO] * (t + 1)
    for (n, m), c in p.items():
        if n + m <= t and f[n] and g[m]:
            out[n + m] += c * f[n] * g[m]
    return USeries(out, t)


# --- algebraic series ------------------------------------------------------------

def _x_valuation(poly):
    return min(e[0] for e in poly.terms)


def _divide_y(poly):
    # P(xy, y) with P(0, 0) = 0 is divisible by y; the quotient has constant term P_y(0, 0)
    return MPoly(2, {(e[0], e[1] - 1): c for e, c in poly.terms.items()})


def furstenberg_bivariate(P, branch, verify=True):
    """Rational function in ``(z0, z1)`` whose diagonal is the root ``branch`` of ``P(x, y)``.

    ``P`` is an :class:`MPoly` in ``(x, y)``; ``branch`` a truncated series
    with zero constant term."""
    if not isinstance(P, MPoly) or P.nvars != 2:
        raise DiagonalError("a bivariate polynomial is expected")
    if branch[0] != 0:
        raise DiagonalError("the branch must vanish at the origin")
    T = branch.trunc
    residual = P.substitute([USeries.x(T), branch])
    if not isinstance(residual, USeries) or not residual.is_zero():
        raise DiagonalError("the seed is not a root of P")
    X = MPoly.var(2, 0)
    Y = MPoly.var(2, 1)
    py = P.derivative(1)
    if py.terms.get((0, 0)):
        if P.terms.get((0, 0)):
            raise DiagonalError("P(0, 0) must vanish")
        num = Y * py.substitute([X * Y, Y])
        den = _divide_y(P.substitute([X * Y, Y]))
        expr = Div(from_mpoly(num), from_mpoly(den))
    else:
        a1, a2 = branch[1], branch[2]
        s = X * a1 + X * X * a2
        R = P.substitute([X, s + X * X * Y])
        if not R:
            raise DiagonalError("P vanishes identically along the shift")
        k = _x_valuation(R)
        R = MPoly(2, {(e[0] - k, e[1]): c for e, c in R.terms.items()})
        if R.terms.get((0, 0)) or not R.derivative(1).terms.get((0, 0)):
            raise DiagonalError("branch is not separable at the origin after the two-term shift")
        Ry = R.derivative(1)
        num = Y * Ry.substitute([X * Y, Y])
        den = _divide_y(R.substitute([X * Y, Y]))
        xy = X * Y
        poly_part = xy * a1 + xy * xy * a2
        # a1*xy + a2*(xy)^2 + (xy)^2 * num/den over one denominator
        expr = Div(from_mpoly(poly_part * den + xy * xy * num), from_mpoly(den))
    if verify:
        d = diagonal(expr, 2, T)
        if d != branch:
            raise DiagonalError("verification failed: diagonal differs from the branch")
    return expr


# --- binomial sums ----------------------------------------------------------------

@dataclass
class BinomFactor:
    top: tuple
    bot: tuple
    pow: int = 1


@dataclass
class BinomSumSpec:
    """``sum_k c^(a n + b k) (-1)^(k sign) prod binom(top, bot)^pow`` for ``0 <= k <= n/div``.

    Depth 0 means no inner sum (``k`` absent)."""

    factors: list
    depth: int = 1
    c: object = 1
    a: int = 0
    b: int = 0
    sign_k: bool = False
    div: int = 1

    @classmethod
    def from_json(cls, data):
        fs = [BinomFactor(tuple(f["top"]), tuple(f["bot"]), int(f.get("pow", 1))) for f in data["factors"]]
        pre = data.get("prefactor") or {}
        return cls(fs, int(data.get("depth", 1)), q(pre.get("c", 1)), int(pre.get("a", 0)),
                   int(pre.get("b", 0)), bool(data.get("sign_k", False)),
                   int((data.get("range") or {}).get("div", 1)))

    def to_json(self):
        return {
            "depth": self.depth,
            "factors": [{"top": list(f.top), "bot": list(f.bot), "pow": f.pow} for f in self.factors],
            "prefactor": {"c": qstr(Q(self.c)), "a": self.a, "b": self.b},
            "sign_k": self.sign_k,
            "range": {"div": self.div},
        }

    def term(self, n, k):
        v = Q(self.c) ** (self.a * n + self.b * k) if self.c != 1 else ONE
        if self.sign_k and k % 2:
            v = -v
        for f in self.factors:
            top = f.top[0] * n + f.top[1] * k
            bot = f.bot[0] * n + f.bot[1] * k
            if top < 0 or bot < 0:
                raise DiagonalError("negative binomial argument at n=%d, k=%d" % (n, k))
            v *= Q(binomial(top, bot)) ** f.pow
        return v

    def series(self, T):
        out = []
        for n in range(T + 1):
            if self.depth == 0:
                out.append(self.term(n, 0))
            else:
                out.append(sum((self.term(n, k) for k in range(n // self.div + 1)), ZERO))
        return USeries(out, T)


@dataclass
class DiagonalCertificate:
    expr: RatExpr
    nvars: int
    series: USeries
    placements: list = field(default_factory=list)

    def verify(self, T=None):
        T = self.series.trunc if T is None else T
        return diagonal(self.expr, self.nvars, T) == self.series.truncate(T)


def _zpow(i, e):
    if e == 0:
        return None
    return Var(i) if e == 1 else Pow(Var(i), e)


def _onep(i, e):
    if e == 0:
        return None
    base = Add([Const(1), Var(i)])
    return base if e == 1 else Pow(base, e)


def _product(fs, coef=ONE):
    fs = [f for f in fs if f is not None]
    if coef != 1:
        fs.insert(0, Const(coef))
    if not fs:
        return Const(1)
    return fs[0] if len(fs) == 1 else Mul(fs)


def binom_sum_to_rational(spec, T=10):
    """Rational function whose diagonal is the binomial sum ``spec`` (verified to ``T``).

    Each binomial ``C(N, M)`` becomes the constant term of ``(1+z)^N / z^M``,
    the double geometric series in ``n = div*k + j`` is summed, and the
    marker ``z0`` together with the product of all ``z_i`` turns the
    ``x``-extraction into a diagonal.  ``z0`` sits in both denominators; each
    binomial uses either ``C(N, M)`` or ``C(N, N-M)`` so that every exponent
    of ``z_i`` stays nonnegative."""
    if spec.depth not in (0, 1):
        raise DiagonalError("only depth 0 and 1 sums are supported")
    r = spec.div if spec.depth == 1 else 1
    if r < 1:
        raise DiagonalError("range divisor must be positive")
    c = Q(spec.c)
    A_parts, B_parts = [Var(0)], []
    placements = []
    i = 1
    for f in spec.factors:
        if f.pow < 0:
            raise DiagonalError("negative binomial exponent")
        al, be = f.top
        choices = [f.bot, (al - f.bot[0], be - f.bot[1])]
        for ga, de in choices:
            if spec.depth == 0:
                de = 0
                ok = 1 - ga >= 0
            else:
                ok = 1 - ga >= 0 and r * (1 - ga) - de >= 0
            if ok:
                break
        else:
            raise DiagonalError("binomial factor %r has no admissible placement" % (f,))
        placements.append((ga, de))
        for _ in range(f.pow):
            A_parts += [_zpow(i, 1 - ga), _onep(i, al)]
            if spec.depth == 1:
                # A^r * B:  z^(r(1-ga)-de) (1+z)^(r al + be)
                B_parts += [_zpow(i, r * (1 - ga) - de), _onep(i, r * al + be)]
            i += 1
    nvars = i
    if spec.depth == 0:
        A = _product(A_parts, c ** spec.a if spec.a else ONE)
        expr = Div(Const(1), Add([Const(1), Neg(A)]))
    else:
        ca = c ** spec.a if spec.a else ONE
        cb = c ** (r * spec.a + spec.b) if (r * spec.a + spec.b) else ONE
        if spec.sign_k:
            cb = -cb
        A = _product(A_parts, ca)
        AB = _product([_zpow(0, r)] + B_parts, cb)
        expr = Div(Const(1), Mul([Add([Const(1), Neg(A)]), Add([Const(1), Neg(AB)])]))
    target = spec.series(T)
    cert = DiagonalCertificate(expr, nvars, target, placements)
    if not cert.verify():
        raise DiagonalError("verification mismatch for the constructed rational function")
    return cert


# --- Laurent-variable diagonal ------------------------------------------------------

def chebyshev_t(n):
    a, b = UPoly.const(1), UPoly.x()
    if n == 0:
        return a
    for _ in range(n - 1):
        a, b = b, UPoly((0, 2)) * b - a
    return b


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def phi_d_diagonal(n, T):
    """Series of ``-1/n! + (2/n!) Diag G_n`` where ``G(w, t) = F_n(w t, 1/t) / sqrt(1 - t^2)``."""
    if n < 2:
        raise DiagonalError("n must be at least 2")
    s = n - 2
    bounds = (T, T * (1 + s))
    lau = (1, s)

    def mono(ew, et, c=1):
        return MSeries.monomial(2, bounds, (ew, et), c, lau)

    one = MSeries.const(2, bounds, 1, lau)
    wt = mono(1, 1)

    def h(u):
        # h(w, t) with w t replaced by the series u, and w*t kept as wt
        rad = ((one - u.scale(2)) ** 2 - (wt * wt).scale(4)).power(Q(1, 2))
        return wt.scale(2) * (one - u.scale(2) + rad).inverse()

    Tn = chebyshev_t(n - 1)
    u_cheb = MSeries(2, bounds, {}, lau)
    for j, cj in enumerate(Tn.coeffs):
        if cj:
            u_cheb = u_cheb + mono(1, 1 - j, cj)
    h1 = h(mono(1, 0))
    h2 = h(u_cheb)
    F = (one - h1 ** (n - 1) * h2).inverse()
    G = F * (one - mono(0, 2)).power(Q(-1, 2))
    d = G.diagonal(T)
    nf = _factorial(n)
    return USeries([(-ONE / nf if m == 0 else ZERO) + d[m] * Q(2, nf) for m in range(T + 1)], T)


def phi_d_oracle(n, T):
    """Independent route: expand ``F_n(w, t)`` as an ordinary series and weight ``t^(2k)``."""
    bounds = (T, T + 2 * T)
    wv = MSeries.var(2, bounds, 0)
    tv = MSeries.var(2, bounds, 1)
    one = MSeries.const(2, bounds, 1)

    def h(w, t):
        rad = ((one - (w * t).scale(2)) ** 2 - (w * w).scale(4)).power(Q(1, 2))
        return w.scale(2) * (one - (w * t).scale(2) + rad).inverse()

    Tn = chebyshev_t(n - 1)
    tc = MSeries(2, bounds, {})
    for j, cj in enumerate(Tn.coeffs):
        if cj:
            tc = tc + MSeries.monomial(2, bounds, (0, j), cj)
    F = (one - h(wv, tv) ** (n - 1) * h(wv, tc)).inverse()
    out = [ZERO] * (T + 1)
    for (a, b), c in F.items():
        if a <= T and b % 2 == 0:
            k = b // 2
            out[a] += c * Q(binomial(2 * k, k), 4 ** k)
    nf = _factorial(n)
    return USeries([(-ONE / nf if m == 0 else ZERO) + out[m] * Q(2, nf) for m in range(T + 1)], T)
