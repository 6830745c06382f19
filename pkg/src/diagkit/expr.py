"""Expression trees for rational and unit-radical functions, with a parser.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" unary)?
    atom   := INTEGER | NAME | "(" expr ")"

Names are ``z0`` .. ``z9`` and, for univariate input, ``x`` (an alias of
``z0``).  Exponents must fold to rational constants; a non-integer exponent
``p/q`` becomes a root node.
"""

import re

from .mseries import MSeries
from .rational import ONE, Q, ZERO, qstr
from .series import USeries
from .poly import RatFunc, UPoly


class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__("%s at position %d" % (message, pos))
        self.pos = pos


class ExpansionError(ValueError):
    pass


class RatExpr:
    """Base node.  Subclasses are immutable."""

    __slots__ = ()

    def __add__(self, other):
        return Add((self, as_expr(other)))

    def __radd__(self, other):
        return Add((as_expr(other), self))

    def __sub__(self, other):
        return Add((self, Neg(as_expr(other))))

    def __rsub__(self, other):
        return Add((as_expr(other), Neg(self)))

    def __mul__(self, other):
        return Mul((self, as_expr(other)))

    def __rmul__(self, other):
        return Mul((as_expr(other), self))

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, e):
        return Pow(self, Q(e))

    def variables(self):
        out = set()
        self._collect(out)
        return out

    def __repr__(self):
        return "RatExpr(%s)" % self.to_str()

    def __eq__(self, other):
        return isinstance(other, RatExpr) and self.to_str() == other.to_str()

    def __hash__(self):
        return hash(self.to_str())


class Const(RatExpr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Q(value)

    def _collect(self, out):
        pass

    def to_str(self):
        return qstr(self.value) if self.value >= 0 and self.value.denominator == 1 else "(%s)" % qstr(self.value)

    def subs_zero(self, k):
        return self


class Var(RatExpr):
    __slots__ = ("index",)

    def __init__(self, index):
        self.index = index

    def _collect(self, out):
        out.add(self.index)

    def to_str(self):
        return "z%d" % self.index

    def subs_zero(self, k):
        return Const(0) if self.index == k else self


class Add(RatExpr):
    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = tuple(terms)

    def _collect(self, out):
        for t in self.terms:
            t._collect(out)

    def to_str(self):
        s = self.terms[0].to_str()
        for t in self.terms[1:]:
            if isinstance(t, Neg):
                s += "-" + t.arg.to_str()
            else:
                s += "+" + t.to_str()
        return "(" + s + ")"

    def subs_zero(self, k):
        return Add(t.subs_zero(k) for t in self.terms)


class Neg(RatExpr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        self.arg = arg

    def _collect(self, out):
        self.arg._collect(out)

    def to_str(self):
        return "(-" + self.arg.to_str() + ")"

    def subs_zero(self, k):
        return Neg(self.arg.subs_zero(k))


class Mul(RatExpr):
    __slots__ = ("factors",)

    def __init__(self, factors):
        self.factors = tuple(factors)

    def _collect(self, out):
        for f in self.factors:
            f._collect(out)

    def to_str(self):
        return "*".join(f.to_str() for f in self.factors)

    def subs_zero(self, k):
        return Mul(f.subs_zero(k) for f in self.factors)


class Div(RatExpr):
    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num, self.den = num, den

    def _collect(self, out):
        self.num._collect(out)
        self.den._collect(out)

    def to_str(self):
        return "(%s/(%s))" % (self.num.to_str(), self.den.to_str())

    def subs_zero(self, k):
        return Div(self.num.subs_zero(k), self.den.subs_zero(k))


class Pow(RatExpr):
    __slots__ = ("base", "exp")

    def __init__(self, base, exp):
        self.base, self.exp = base, Q(exp)

    def _collect(self, out):
        self.base._collect(out)

    def to_str(self):
        e = qstr(self.exp)
        return "(%s)^%s" % (self.base.to_str(), e if self.exp.denominator == 1 and self.exp >= 0 else "(" + e + ")")

    def subs_zero(self, k):
        return Pow(self.base.subs_zero(k), self.exp)


def as_expr(value):
    if isinstance(value, RatExpr):
        return value
    return Const(value)


def var(i):
    return Var(i)


# --- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos:
            break
        num, name, op = m.groups()
        start = m.start(m.lastindex) if m.lastindex else pos
        if num is not None:
            tokens.append(("num", int(num), start))
        elif name is not None:
            tokens.append(("name", name, start))
        elif op is not None:
            if op not in "+-*/^()":
                raise ParseError("unexpected character %r" % op, start)
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, names):
        self.tokens = _tokenize(text)
        self.i = 0
        self.names = names

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise ParseError("expected %r" % op, tok[2])

    def parse(self):
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError("unexpected token %r" % (tok[1],), tok[2])
        return e

    def expr(self):
        terms = [self.term()]
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            terms.append(t if op == "+" else _neg(t))
        return terms[0] if len(terms) == 1 else _fold(Add(terms))

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            rhs = self.unary()
            node = _fold(Mul((node, rhs))) if op == "*" else _fold(Div(node, rhs))
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            arg = self.unary()
            return arg if tok[1] == "+" else _neg(arg)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            tok = self.take()
            ex = self.unary()
            if not isinstance(ex, Const):
                raise ParseError("exponent must be a rational constant", tok[2])
            if isinstance(base, Const) and ex.value.denominator == 1:
                return Const(base.value ** int(ex.value))
            return Pow(base, ex.value)
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return Const(val)
        if kind == "name":
            if val not in self.names:
                raise ParseError("unknown identifier %r" % val, pos)
            return Var(self.names[val])
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError("unexpected token %r" % (val,), pos)


def _neg(e):
    if isinstance(e, Const):
        return Const(-e.value)
    return Neg(e)


def _fold(node):
    if isinstance(node, Add) and all(isinstance(t, Const) for t in node.terms):
        return Const(sum((t.value for t in node.terms), ZERO))
    if isinstance(node, Mul) and all(isinstance(f, Const) for f in node.factors):
        v = ONE
        for f in node.factors:
            v *= f.value
        return Const(v)
    if isinstance(node, Div) and isinstance(node.num, Const) and isinstance(node.den, Const):
        if node.den.value == 0:
            raise ExpansionError("division by the constant zero")
        return Const(node.num.value / node.den.value)
    return node


def parse_expr(text, nvars=None):
    """Parse ``text``; with ``nvars`` given, only ``z0..z{nvars-1}`` (and ``x``
    when ``nvars == 1``) are accepted."""
    limit = 10 if nvars is None else nvars
    names = {"z%d" % i: i for i in range(limit)}
    if nvars is None or nvars == 1:
        names["x"] = 0
    return _Parser(text, names).parse()


# --- expansion -------------------------------------------------------------

def expand(expr, bounds, laurent=None):
    """Taylor expansion of ``expr`` with per-variable degree bounds."""
    if isinstance(bounds, int):
        nv = max(expr.variables(), default=-1) + 1
        bounds = (bounds,) * max(nv, 1)
    bounds = tuple(bounds)
    nvars = len(bounds)
    bad = [v for v in expr.variables() if v >= nvars]
    if bad:
        raise ExpansionError("expression uses z%d beyond the %d declared variables" % (bad[0], nvars))
    cache = {}
    return _expand(expr, nvars, bounds, laurent, cache)


def _expand(node, nvars, bounds, laurent, cache):
    key = id(node)
    if key in cache:
        return cache[key][1]
    if isinstance(node, Const):
        out = MSeries.const(nvars, bounds, node.value, laurent)
    elif isinstance(node, Var):
        out = MSeries.var(nvars, bounds, node.index, laurent)
    elif isinstance(node, Add):
        out = _expand(node.terms[0], nvars, bounds, laurent, cache)
        for t in node.terms[1:]:
            out = out + _expand(t, nvars, bounds, laurent, cache)
    elif isinstance(node, Neg):
        out = -_expand(node.arg, nvars, bounds, laurent, cache)
    elif isinstance(node, Mul):
        consts = [f for f in node.factors if isinstance(f, Const)]
        rest = [f for f in node.factors if not isinstance(f, Const)]
        c = ONE
        for f in consts:
            c *= f.value
        if not rest:
            out = MSeries.const(nvars, bounds, c, laurent)
        else:
            out = _expand(rest[0], nvars, bounds, laurent, cache)
            for f in rest[1:]:
                out = out * _expand(f, nvars, bounds, laurent, cache)
            if c != 1:
                out = out.scale(c)
    elif isinstance(node, Div):
        den = _expand(node.den, nvars, bounds, laurent, cache)
        if not den.constant_term():
            raise ExpansionError("denominator %s vanishes at the origin" % node.den.to_str())
        num = _expand(node.num, nvars, bounds, laurent, cache)
        out = num * den.inverse()
    elif isinstance(node, Pow):
        base = _expand(node.base, nvars, bounds, laurent, cache)
        e = node.exp
        if (e < 0 or e.denominator != 1) and not base.constant_term():
            raise ExpansionError("power %s of %s needs a nonzero constant term" % (qstr(e), node.base.to_str()))
        try:
            out = base.power(e)
        except ValueError as exc:
            raise ExpansionError(str(exc)) from exc
    else:
        raise TypeError("unknown node %r" % (node,))
    cache[key] = (node, out)
    return out


def expand_univariate(expr, trunc):
    """Expand an expression in ``x`` (or ``z0``) as a :class:`USeries`."""
    if any(v != 0 for v in expr.variables()):
        raise ExpansionError("univariate expression expected")
    return _univariate(expr, trunc, {})


def _univariate(node, t, cache):
    # dense univariate fast path mirroring _expand
    key = id(node)
    if key in cache:
        return cache[key][1]
    if isinstance(node, Const):
        out = USeries.const(node.value, t)
    elif isinstance(node, Var):
        out = USeries.x(t)
    elif isinstance(node, Add):
        out = _univariate(node.terms[0], t, cache)
        for s in node.terms[1:]:
            out = out + _univariate(s, t, cache)
    elif isinstance(node, Neg):
        out = -_univariate(node.arg, t, cache)
    elif isinstance(node, Mul):
        out = _univariate(node.factors[0], t, cache)
        for f in node.factors[1:]:
            out = out * _univariate(f, t, cache)
    elif isinstance(node, Div):
        den = _univariate(node.den, t, cache)
        if not den[0]:
            raise ExpansionError("denominator %s vanishes at the origin" % node.den.to_str())
        out = _univariate(node.num, t, cache) / den
    elif isinstance(node, Pow):
        base = _univariate(node.base, t, cache)
        try:
            out = base ** int(node.exp) if node.exp.denominator == 1 else base.power(node.exp)
        except ValueError as exc:
            raise ExpansionError(str(exc)) from exc
    else:
        raise TypeError("unknown node %r" % (node,))
    cache[key] = (node, out)
    return out


def to_ratfunc(expr):
    """Exact rational function of a univariate expression (integer powers only)."""
    if isinstance(expr, str):
        expr = parse_expr(expr, 1)
    if any(v != 0 for v in expr.variables()):
        raise ExpansionError("univariate expression expected")
    return _ratfunc(expr)


def _ratfunc(node):
    if isinstance(node, Const):
        return RatFunc(UPoly.const(node.value))
    if isinstance(node, Var):
        return RatFunc(UPoly.x())
    if isinstance(node, Add):
        out = _ratfunc(node.terms[0])
        for s in node.terms[1:]:
            out = out + _ratfunc(s)
        return out
    if isinstance(node, Neg):
        return -_ratfunc(node.arg)
    if isinstance(node, Mul):
        out = _ratfunc(node.factors[0])
        for f in node.factors[1:]:
            out = out * _ratfunc(f)
        return out
    if isinstance(node, Div):
        return _ratfunc(node.num) / _ratfunc(node.den)
    if isinstance(node, Pow):
        if node.exp.denominator != 1:
            raise ExpansionError("fractional power in a rational function")
        return _ratfunc(node.base) ** int(node.exp)
    raise TypeError("unknown node %r" % (node,))


def remap(node, mapping):
    """Copy of ``node`` with variable ``i`` renamed to ``mapping[i]``."""
    if isinstance(node, Const):
        return node
    if isinstance(node, Var):
        return Var(mapping[node.index])
    if isinstance(node, Add):
        return Add([remap(t, mapping) for t in node.terms])
    if isinstance(node, Neg):
        return Neg(remap(node.arg, mapping))
    if isinstance(node, Mul):
        return Mul([remap(f, mapping) for f in node.factors])
    if isinstance(node, Div):
        return Div(remap(node.num, mapping), remap(node.den, mapping))
    if isinstance(node, Pow):
        return Pow(remap(node.base, mapping), node.exp)
    raise TypeError("unknown node %r" % (node,))


def from_mpoly(poly):
    """Expression tree of a :class:`MPoly` (variable ``i`` becomes ``z_i``)."""
    terms = []
    for e, c in sorted(poly.terms.items()):
        fs = [] if c == 1 else [Const(c)]
        for i, k in enumerate(e):
            if k == 1:
                fs.append(Var(i))
            elif k > 1:
                fs.append(Pow(Var(i), k))
        if not fs:
            fs = [Const(1)]
        terms.append(fs[0] if len(fs) == 1 else Mul(fs))
    if not terms:
        return Const(0)
    return terms[0] if len(terms) == 1 else Add(terms)
