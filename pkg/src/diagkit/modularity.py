"""Log ladders of MUM operators, Yukawa couplings, Schwarzian and modular-curve checks."""

import json
from dataclasses import dataclass, field
from itertools import permutations

from .dfinite import (LinDiffOp, OperatorError, adjoint, bounded_rational_solutions, conjugate_op,
                      exterior_square, frobenius_class, heun_series, indicial_exponents, is_mum,
                      pfq_series, series_solution)
from .expr import _Parser, expand, expand_univariate, parse_expr
from .integrality import find_rescaling, factor_integer
from .poly import MPoly, RatFunc, UPoly
from .rational import ONE, Q, ZERO, binomial, qstr
from .series import USeries


class NotMumError(OperatorError):
    pass


# --- MUM basis -----------------------------------------------------------------

@dataclass
class MumBasis:
    """``y_k = x^rho * sum_{j<=k} ytilde[j] * log(x)^(k-j)/(k-j)!``."""

    order: int
    rho: object
    ytilde: list
    trunc: int

    @property
    def y0(self):
        return self.ytilde[0]

    def log_solution(self, k):
        """Coefficient list of ``log^j/j!`` for ``y_k`` (gauge ``x^rho`` left implicit)."""
        return {j: self.ytilde[k - j] for j in range(k + 1)}


def frobenius_mum_basis(L, trunc):
    if not is_mum(L):
        raise NotMumError("operator is not MUM at 0")
    n = L.order
    rho = indicial_exponents(L)[0][0]
    vecs, constraints, nparams = frobenius_class(L, rho, n, trunc)
    if any(any(c) for c in constraints):
        raise OperatorError("unexpected resonance constraints for a MUM operator")
    # parameters fixing the top solution: log level n-1 starts with 1, lower levels with 0
    rows = [list(vecs[0][j]) for j in range(n)]
    target = [ZERO] * (n - 1) + [ONE]
    b = _solve_square(rows, target)
    levels = []
    for j in range(n):
        cs = [sum((vecs[m][j][t] * b[t] for t in range(nparams) if b[t]), ZERO) for m in range(trunc + 1)]
        levels.append(USeries(cs, trunc))
    ytilde = [levels[n - 1 - k] for k in range(n)]
    return MumBasis(n, rho, ytilde, trunc)


def _solve_square(rows, rhs):
    n = len(rows)
    a = [list(r) + [Q(v)] for r, v in zip(rows, rhs)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c])
        a[c], a[piv] = a[piv], a[c]
        inv = ONE / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [u - f * v for u, v in zip(a[r], a[c])]
    return [a[r][n] for r in range(n)]


def nome(L, trunc=None, basis=None):
    """``q(x) = x * exp(ytilde1 / y0)``."""
    if basis is None:
        basis = frobenius_mum_basis(L, trunc)
    if basis.order < 2:
        raise OperatorError("nome needs order >= 2")
    return (basis.ytilde[1] / basis.y0).exp().shift(1)


def mirror_map(L, trunc=None, basis=None):
    return nome(L, trunc, basis).reverse()


# --- log-polynomial arithmetic over Q[[x]] ----------------------------------------
# an element is a dict j -> USeries standing for sum_j f_j log^j/j!, gauge x^rho implicit

def _lmul(a, b, trunc):
    out = {}
    for i, f in a.items():
        for j, g in b.items():
            c = binomial(i + j, i)
            term = (f * g).truncate(trunc)
            if c != 1:
                term = term.scale(c)
            out[i + j] = out[i + j] + term if i + j in out else term
    return out


def _ladd(a, b):
    out = dict(a)
    for j, g in b.items():
        out[j] = out[j] + g if j in out else g
    return out


def _lscale(a, c):
    return {j: f.scale(c) for j, f in a.items()}


def _ltheta(a, rho):
    out = {}
    for j, f in a.items():
        t = f.theta()
        if rho:
            t = t + f.scale(rho)
        out[j] = out[j] + t if j in out else t
        if j:
            out[j - 1] = out[j - 1] + f if j - 1 in out else f
    return out


def _ldet(mat, trunc):
    m = len(mat)
    total = {}
    for perm in permutations(range(m)):
        sign = 1
        for i in range(m):
            for j in range(i + 1, m):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = {0: USeries.one(trunc)}
        for i in range(m):
            prod = _lmul(prod, mat[i][perm[i]], trunc)
        total = _ladd(total, prod if sign > 0 else _lscale(prod, -1))
    return total


@dataclass
class WLadder:
    """``W[m-1]`` is ``det(theta^i y_k)_{i,k<m}`` divided by ``x^(m*rho)``.

    The theta determinants differ from the derivative ones by ``x^(m(m-1)/2)``;
    both leading exponents are recorded in ``shifts``."""

    W: list
    rho: object
    shifts: list = field(default_factory=list)

    def __getitem__(self, m):
        return self.W[m - 1]


def wronskian_ladder(L, basis=None, trunc=None, upto=None):
    if basis is None:
        basis = frobenius_mum_basis(L, trunc)
    n = basis.order if upto is None else upto
    T = basis.trunc
    cols = [basis.log_solution(k) for k in range(n)]
    rows = [cols]
    for _ in range(1, n):
        rows.append([_ltheta(c, basis.rho) for c in rows[-1]])
    W = []
    for m in range(1, n + 1):
        d = _ldet([row[:m] for row in rows[:m]], T)
        for j, f in d.items():
            if j and not f.is_zero():
                raise OperatorError("log terms survive in W%d: the basis is inconsistent" % m)
        w = d.get(0, USeries.zero(T))
        lead = w.coeffs[0]
        if not lead:
            raise OperatorError("W%d vanishes at 0" % m)
        if lead != 1:
            w = w.scale(ONE / lead)
        W.append(w)
    shifts = [m * basis.rho - m * (m - 1) // 2 for m in range(1, n + 1)]
    return WLadder(W, basis.rho, shifts)


def abel_wronskian(L, trunc):
    """Normalised ``theta``-Wronskian from the two top coefficients alone."""
    n = L.order
    h = RatFunc(L.coeffs[n - 1] * UPoly.x(), L.coeffs[n]) * (-1) + n * (n - 1) // 2
    hs = h.to_series(trunc)
    hs.coeffs[0] = ZERO
    return hs.shift(-1).integrate().exp()


# --- Yukawa couplings ------------------------------------------------------------------

def _in_q(f, xq):
    return f.compose(xq)


@dataclass
class Yukawa:
    K_x: USeries
    K_q: USeries
    mirror: USeries
    ladder: WLadder = None


def yukawa(L, trunc=12, basis=None, check=True):
    """``K(x) = W1^3 W3 / W2^3`` and ``K(q)``; with ``check`` the second-derivative
    route ``(q d/dq)^2 (y2/y0)`` is computed too and must agree."""
    if basis is None:
        basis = frobenius_mum_basis(L, trunc)
    if basis.order < 3:
        raise OperatorError("Yukawa coupling needs order >= 3")
    lad = wronskian_ladder(L, basis, upto=3)
    W1, W2, W3 = lad.W[:3]
    Kx = W1 ** 3 * W3 / W2 ** 3
    xq = mirror_map(L, basis=basis)
    T = min(trunc, xq.trunc)
    Kq = _in_q(Kx.truncate(T), xq.truncate(T))
    if check:
        y0, y1, y2 = basis.ytilde[:3]
        r1 = y1 / y0
        g = y2 / y0 - (r1 * r1).scale(Q(1, 2))
        alt = _in_q(g.truncate(T), xq.truncate(T)).theta().theta() + 1
        if alt.truncate(T) != Kq.truncate(T):
            raise AssertionError("Yukawa routes disagree")
    return Yukawa(Kx, Kq, xq, lad)


def morrison_yukawa(L, trunc=12, basis=None):
    """``(W4^(1/2) / y0^2) * (x^-1 dx/dlog q)^3`` with ``W4`` from Abel's formula."""
    if basis is None:
        basis = frobenius_mum_basis(L, trunc)
    if L.order != 4:
        raise OperatorError("Morrison form is stated for order 4")
    W4 = abel_wronskian(L, basis.trunc)
    q = nome(L, basis=basis)
    dlogq = q.theta().shift(-1) / q.shift(-1)
    Kx = W4.power(Q(1, 2)) / (basis.y0 * basis.y0) / dlogq ** 3
    xq = q.reverse()
    T = min(trunc, xq.trunc)
    return Kx, _in_q(Kx.truncate(T), xq.truncate(T))


def adjoint_yukawa(L, trunc=12, basis=None, check=True):
    """``K* = W1 W3^3 / (W4 W2^3)`` as a series in the nome of ``adjoint(L)``.

    The x-series is the Yukawa coupling of the adjoint; the two nomes agree
    when ``L`` is conjugate to its adjoint, and differ otherwise."""
    if basis is None:
        basis = frobenius_mum_basis(L, trunc)
    if basis.order != 4:
        raise OperatorError("adjoint Yukawa is defined for order 4")
    W1, W2, W3, W4 = wronskian_ladder(L, basis).W
    Kx = W1 * W3 ** 3 / (W4 * W2 ** 3)
    A = adjoint(L)
    abasis = frobenius_mum_basis(A, basis.trunc)
    if check:
        Ka = yukawa(A, basis.trunc, abasis, check=False).K_x
        if Ka != Kx:
            raise AssertionError("determinant ratio differs from the Yukawa coupling of the adjoint")
    xq = mirror_map(A, basis=abasis)
    T = min(trunc, xq.trunc)
    return _in_q(Kx.truncate(T), xq.truncate(T))


def kn_invariants(L, trunc=12, basis=None):
    """``{m: K_m(q)}`` with ``K_m = W1^(m(m-2)) W_m / W2^(m(m-1)/2)``."""
    if basis is None:
        basis = frobenius_mum_basis(L, trunc)
    lad = wronskian_ladder(L, basis)
    xq = mirror_map(L, basis=basis)
    T = min(trunc, xq.trunc)
    out = {}
    W1, W2 = lad.W[0], lad.W[1]
    for m in range(3, basis.order + 1):
        K = W1 ** (m * (m - 2)) * lad.W[m - 1] / W2 ** (m * (m - 1) // 2)
        out[m] = _in_q(K.truncate(T), xq.truncate(T))
    return out


def self_adjoint_condition(L, trunc=12, basis=None):
    """``W3^2 == W1^2 W4`` for an order-4 ladder."""
    if basis is None:
        basis = frobenius_mum_basis(L, trunc)
    W1, W2, W3, W4 = wronskian_ladder(L, basis).W
    return W3 * W3 == W1 * W1 * W4


# --- Calabi-Yau report ------------------------------------------------------------------

def adjoint_conjugator(L):
    """Candidate ``r = rho'/rho`` matching the subleading coefficients of
    ``conjugate_op(L, r)`` and ``adjoint(L)``; returned only if the full
    operators agree."""
    n = L.order
    pn, pm = L.coeffs[n], L.coeffs[n - 1]
    r = RatFunc(pm * 2 - pn.derivative() * n, pn * n)
    if conjugate_op(L, r).normalized() == adjoint(L).normalized():
        return r
    return None


@dataclass
class CYReport:
    is_mum: bool
    ext2_order: int = None
    ext2_rational_solution: object = None
    conjugator: object = None
    y0_verdict: object = None
    nome_verdict: object = None
    notes: list = field(default_factory=list)

    @property
    def calabi_yau(self):
        return bool(self.is_mum and self.ext2_order == 5 and self.conjugator is not None)

    def to_json(self):
        return {
            "is_mum": self.is_mum,
            "ext2_order": self.ext2_order,
            "ext2_rational_solution": None if self.ext2_rational_solution is None
            else repr(self.ext2_rational_solution),
            "conjugator": None if self.conjugator is None else repr(self.conjugator),
            "y0": None if self.y0_verdict is None else self.y0_verdict.to_json(),
            "nome": None if self.nome_verdict is None else self.nome_verdict.to_json(),
            "calabi_yau": self.calabi_yau,
            "notes": list(self.notes),
        }


def calabi_yau_report(L, trunc=24, rational_bound=2, seed=0):
    rep = CYReport(is_mum(L))
    try:
        E = exterior_square(L, seed)
        rep.ext2_order = E.order
        sols = bounded_rational_solutions(E, rational_bound)
        if sols:
            rep.ext2_rational_solution = sols[0]
        elif rep.ext2_order == 6:
            rep.notes.append("no rational solution of the exterior square within bound %d" % rational_bound)
    except OperatorError as exc:
        rep.notes.append("exterior square: %s" % exc)
    if L.order == 4:
        rep.conjugator = adjoint_conjugator(L)
        if rep.conjugator is None:
            rep.notes.append("no conjugation to the adjoint found")
    if rep.is_mum:
        basis = frobenius_mum_basis(L, trunc)
        rep.y0_verdict = find_rescaling(basis.y0)
        rep.nome_verdict = find_rescaling(nome(L, basis=basis))
    else:
        exps, rest = indicial_exponents(L)
        if rest.degree <= 0 and 0 in exps:
            rep.y0_verdict = find_rescaling(series_solution(L, [1], trunc))
    return rep


# --- Schwarzian ------------------------------------------------------------------------

_DEFAULT_WEIGHT = RatFunc(UPoly((9, -8, 8)), UPoly((0, 0, 18)) * UPoly((-1, 1)) ** 2)


def schwarzian(f):
    """``f'''/f' - 3/2 (f''/f')^2`` for a rational function or a series with ``f'(0) != 0``."""
    d1 = f.derivative()
    d2 = d1.derivative()
    d3 = d2.derivative()
    if isinstance(f, RatFunc):
        return d3 / d1 - (d2 / d1) ** 2 * Q(3, 2)
    r = d2 / d1.truncate(d2.trunc)
    return d3 / d1.truncate(d3.trunc) - (r * r).truncate(d3.trunc).scale(Q(3, 2))


def _schwarz_fraction(p, weight):
    """``{p,x} + W(p) p'^2`` as a numerator/denominator pair free of divisions."""
    d1 = p.derivative()
    d2 = d1.derivative()
    d3 = d2.derivative()
    N = _eval_poly(weight.num, p)
    D = _eval_poly(weight.den, p)
    num = (d3 * d1 * 2 - d2 * d2 * 3) * D + N * d1 ** 4 * 2
    den = d1 * d1 * D * 2
    return num, den


def _eval_poly(P, f):
    acc = None
    for c in reversed(P.coeffs):
        acc = (f * 0 + c) if acc is None else acc * f + c
    if acc is None:
        return f * 0
    return acc


def schwarzian_pair_check(p1, p2, weight=None):
    """Compare ``{p,x} + W(p) p'^2`` for two pullbacks (rational functions or series)."""
    weight = _DEFAULT_WEIGHT if weight is None else weight
    if isinstance(p1, RatFunc) and isinstance(p2, RatFunc):
        n1, d1 = _schwarz_fraction(p1, weight)
        n2, d2 = _schwarz_fraction(p2, weight)
        return n1 / d1 == n2 / d2
    n1, d1 = _schwarz_fraction(_as_series(p1, p2), weight)
    n2, d2 = _schwarz_fraction(_as_series(p2, p1), weight)
    lhs, rhs = n1 * d2, n2 * d1
    T = min(lhs.trunc, rhs.trunc)
    return lhs.truncate(T) == rhs.truncate(T)


def _as_series(p, other):
    if isinstance(p, USeries):
        return p
    T = other.trunc if isinstance(other, USeries) else 20
    if isinstance(p, UPoly):
        p = RatFunc(p)
    return p.to_series(T)


# --- modular curves --------------------------------------------------------------------

def curve_from_text(text, names=("u", "v")):
    """Bivariate polynomial from text in the given variable names."""
    node = _Parser(text, {n: i for i, n in enumerate(names)}).parse()
    bound = 64
    ms = expand(node, (bound,) * len(names))
    terms = {e: c for e, c in ms.items() if c}
    if any(max(e) >= bound for e in terms):
        raise ValueError("curve degree too large")
    return MPoly(len(names), terms)


@dataclass
class CurveCheck:
    ok: bool
    matched: int = None
    required: int = None

    def __bool__(self):
        return self.ok


def modular_curve_check(Phi, u, v):
    """``Phi(u, v) == 0``: exact for rational inputs, to the truncation for series.

    Series inputs need ``3 * deg(Phi)`` matched terms beyond ``deg(Phi)``."""
    if isinstance(Phi, str):
        Phi = curve_from_text(Phi)
    if not isinstance(u, USeries) and not isinstance(v, USeries):
        u = u if isinstance(u, RatFunc) else RatFunc(u)
        v = v if isinstance(v, RatFunc) else RatFunc(v)
        return CurveCheck(Phi.substitute([u, v]).is_zero())
    T = max(s.trunc for s in (u, v) if isinstance(s, USeries))
    u = _as_series(u, USeries.zero(T))
    v = _as_series(v, USeries.zero(T))
    val = Phi.substitute([u, v])
    deg = Phi.degree()
    required = 4 * deg
    matched = val.trunc + 1
    return CurveCheck(val.is_zero() and matched >= required, matched, required)


# --- identity checks --------------------------------------------------------------------

class IdentityError(ValueError):
    pass


def _radical(c, e):
    """Split ``c^e`` (``c`` a nonzero rational) into a rational factor and a
    key ``((p, frac), ...)`` for the irrational remainder."""
    c, e = Q(c), Q(e)
    if e.denominator == 1:
        return c ** int(e), ()
    if c < 0:
        if e.denominator % 2 == 0:
            raise IdentityError("even root of a negative constant")
        return -_radical(-c, e)[0], _radical(-c, e)[1]
    exps = {}
    for part, s in ((c.numerator, 1), (c.denominator, -1)):
        fac, opaque = factor_integer(part)
        if opaque:
            raise IdentityError("cannot factor %s" % part)
        for p, k in fac.items():
            exps[p] = exps.get(p, ZERO) + s * k * e
    rat = ONE
    key = []
    for p in sorted(exps):
        k = exps[p]
        whole = k.numerator // k.denominator
        rat *= Q(p) ** whole
        frac = k - whole
        if frac:
            key.append((p, frac))
    return rat, tuple(key)


def _merge_keys(a, b):
    exps = dict(a)
    rat = ONE
    for p, f in b:
        exps[p] = exps.get(p, ZERO) + f
    key = []
    for p in sorted(exps):
        k = exps[p]
        whole = k.numerator // k.denominator
        rat *= Q(p) ** whole
        if k - whole:
            key.append((p, k - whole))
    return rat, tuple(key)


def _series_of(text, T):
    return expand_univariate(parse_expr(text, 1), T)


def _factor_series(fac, T):
    """``(rational, radical key, unit-normalised series)`` for one factor."""
    if "expr" in fac:
        f = _series_of(fac["expr"], T)
    else:
        arg = _series_of(fac.get("arg", "x"), T)
        if "pFq" in fac:
            up, low = fac["pFq"]
            base = pfq_series([Q(a) for a in up], [Q(b) for b in low], 1, T)
        elif "heun" in fac:
            a, qq, al, be, ga, de = [Q(v) for v in fac["heun"]]
            base = heun_series(a, qq, al, be, ga, de, 1, T)
        elif "op" in fac:
            from .catalog import named_operator

            op = fac["op"]
            L = named_operator(op) if isinstance(op, str) else LinDiffOp.from_json(op)
            base = series_solution(L, [Q(c) for c in fac.get("init", [1])], T)
        else:
            raise IdentityError("unknown factor %r" % (fac,))
        f = base if arg == USeries.x(T) else base.compose(arg)
    e = Q(fac.get("pow", 1))
    v = f.valuation()
    if v is None:
        return ZERO, (), f
    if v and (e.denominator != 1 or e < 0):
        raise IdentityError("power %s of a series vanishing at 0" % qstr(e))
    f = f.shift(-v)
    c0 = f.coeffs[0]
    unit = f.scale(ONE / c0)
    if e != 1:
        unit = unit.power(e)
    rat, key = _radical(c0, e)
    return rat, key, unit.shift(v * int(e)).truncate(T) if v else unit


def _side(terms, T):
    groups = {}
    for term in terms:
        rat = Q(term.get("coef", 1))
        key = ()
        acc = USeries.one(T)
        for fac in term["factors"]:
            r, k, s = _factor_series(fac, T)
            extra, key = _merge_keys(key, k)
            rat *= r * extra
            acc = (acc * s).truncate(T)
        acc = acc.scale(rat)
        groups[key] = groups[key] + acc if key in groups else acc
    return {k: v for k, v in groups.items() if not v.is_zero()}


def identity_check(lhs, rhs, trunc=20):
    """Series equality of two sides, each a list of terms ``{"coef", "factors"}``."""
    a, b = _side(lhs, trunc), _side(rhs, trunc)
    if set(a) != set(b):
        return False
    return all(a[k].truncate(trunc) == b[k].truncate(trunc) for k in a)


def side_series(terms, trunc=20):
    """The rational-radical-free part of one side (raises if radicals remain)."""
    groups = _side(terms, trunc)
    if not groups:
        return USeries.zero(trunc)
    if list(groups) != [()]:
        raise IdentityError("side carries irrational constants")
    return groups[()]


def load_corpus(path):
    with open(path) as fh:
        return json.load(fh)
