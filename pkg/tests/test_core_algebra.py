from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from diagkit.expr import ExpansionError, ParseError, expand, expand_univariate, parse_expr, to_ratfunc
from diagkit.mseries import MSeries
from diagkit.poly import MPoly, RatFunc, UPoly
from diagkit.rational import Q, binomial, iroot, is_probable_prime, q, qstr, rational_root, valuation
from diagkit.series import SeriesError, USeries

small = st.integers(-6, 6)
fracs = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def series_st(min_size=1, unit=False, trunc=10):
    coeffs = st.lists(small, min_size=min_size, max_size=trunc + 1)
    if unit:
        coeffs = coeffs.map(lambda cs: [1] + cs[1:])
    return coeffs.map(lambda cs: USeries(cs, trunc))


# --- rationals -------------------------------------------------------------------------

def test_rational_parsing_and_printing():
    assert q("3/6") == Q(1, 2)
    assert q(Fraction(-4, 6)) == Q(-2, 3)
    assert qstr(Q(-7, 3)) == "-7/3"
    assert qstr(Q(4)) == "4"


def test_roots_and_valuations():
    assert rational_root(Q(8, 27), 3) == Q(2, 3)
    assert rational_root(Q(2), 2) is None
    assert iroot(10 ** 12, 3) == 10 ** 4
    assert valuation(2 ** 5 * 3, 2) == 5
    assert binomial(10, 3) == 120
    assert [p for p in range(2, 30) if is_probable_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@given(st.integers(1, 10 ** 4), st.integers(2, 5))
def test_iroot_exact_only(r, n):
    assert iroot(r ** n, n) == r
    assert iroot(r ** n + 1, n) is None


# --- univariate polynomials and rational functions -------------------------------------

@given(st.lists(small, max_size=6), st.lists(small, min_size=1, max_size=4).filter(any))
def test_polynomial_division(a, b):
    A, B = UPoly(a), UPoly(b)
    qq, r = A.divmod(B)
    assert qq * B + r == A
    assert r.degree < B.degree or r.is_zero()


@given(st.lists(small, min_size=1, max_size=5).filter(any), st.lists(small, min_size=1, max_size=5).filter(any),
       st.lists(small, min_size=1, max_size=3).filter(any))
def test_gcd_divides(a, b, c):
    A, B, C = UPoly(a), UPoly(b), UPoly(c)
    g = (A * C).gcd(B * C)
    assert ((A * C) % g).is_zero() and ((B * C) % g).is_zero()
    assert (g % C.monic()).is_zero()


@given(st.lists(small, min_size=1, max_size=4).filter(any), st.lists(small, min_size=1, max_size=3).filter(any))
def test_ratfunc_field_laws(a, b):
    f = RatFunc(UPoly(a), UPoly((1,)) + UPoly.x() * UPoly(b))
    g = RatFunc(UPoly(b), UPoly((1, 2)))
    assert (f + g) - g == f
    if f:
        assert (f * g) / f == g
    assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


def test_ratfunc_series_and_composition():
    f = RatFunc(UPoly((1,)), UPoly((1, -1)))
    assert f.to_series(5).coeffs == [Q(1)] * 6
    g = f.compose(RatFunc(UPoly((0, 2))))
    assert g.to_series(4).coeffs == [Q(2 ** n) for n in range(5)]


def test_multivariate_substitution():
    P = MPoly.var(2, 0) * MPoly.var(2, 1) - MPoly.var(2, 1) ** 2
    x = RatFunc.x()
    assert P.substitute([x, x]).is_zero()
    assert P.degree() == 2
    assert P.derivative(1) == MPoly.var(2, 0) - MPoly.var(2, 1) * 2


# --- univariate series -------------------------------------------------------------------

@given(series_st(unit=True), series_st(unit=True))
def test_multiplication_inverse(f, g):
    assert (f * g) / g == f
    assert f * f.invert() == USeries.one(f.trunc)


@given(series_st().map(lambda f: f.shift(1).truncate(10)))
def test_exp_log_roundtrip(f):
    assert f.exp().log() == f


@given(series_st(unit=True), fracs, fracs)
def test_power_laws(f, a, b):
    a, b = Q(a), Q(b)
    assert f.power(a) * f.power(b) == f.power(a + b)


@given(series_st(unit=True), st.integers(2, 5))
def test_nth_root(f, n):
    r = f.nth_root(n)
    assert r ** n == f


@given(st.lists(small, min_size=9, max_size=9))
def test_reverse_is_compositional_inverse(cs):
    f = USeries([0, 1] + cs, 10)
    g = f.reverse()
    x = USeries.x(10)
    assert f.compose(g) == x and g.compose(f) == x


def test_reverse_known():
    # x/(1-x) and x/(1+x) are inverse
    f = to_ratfunc("x/(1-x)").to_series(8)
    assert f.reverse() == to_ratfunc("x/(1+x)").to_series(8)
    # Catalan: reverse of x - x^2
    c = USeries([0, 1, -1], 8).reverse()
    assert c.coeffs[1:] == [Q(comb(2 * n, n) // (n + 1)) for n in range(8)]


def test_series_errors():
    with pytest.raises(SeriesError):
        USeries([0, 1], 4).invert()
    with pytest.raises(SeriesError):
        USeries([1, 1], 4).reverse()


def test_theta_and_shift():
    f = USeries([1, 1, 1, 1], 3)
    assert f.theta().coeffs == [0, 1, 2, 3]
    assert f.shift(2).coeffs[:3] == [0, 0, 1]
    assert f.integrate().coeffs[:4] == [0, 1, Q(1, 2), Q(1, 3)]


def test_exp_known():
    e = USeries.x(8).exp()
    assert e.coeffs == [Q(1, factorial(n)) for n in range(9)]


def test_series_json_roundtrip():
    f = USeries([Q(1, 3), -2, 5], 4)
    assert USeries.from_json(f.to_json()) == f


# --- expressions ------------------------------------------------------------------------

def test_parser_and_expansion():
    e = parse_expr("1/(1 - z0 - z1)", 2)
    ms = expand(e, (4, 4))
    assert ms.coeff((2, 2)) == 6 and ms.coeff((1, 3)) == 4
    f = expand_univariate(parse_expr("(1-4*x)^(-1/2)", 1), 6)
    assert f.coeffs == [Q(comb(2 * n, n)) for n in range(7)]


def test_parser_errors():
    with pytest.raises(ParseError):
        parse_expr("1/(1-z0", 1)
    with pytest.raises(ExpansionError):
        expand_univariate(parse_expr("1/x", 1), 4)


@given(st.lists(small, min_size=1, max_size=4), st.lists(small, min_size=1, max_size=3))
def test_to_ratfunc_matches_expansion(a, b):
    num = UPoly(a)
    den = UPoly((1,)) + UPoly.x() * UPoly(b)
    text = "(%s)/(%s)" % (num.pretty("x") if num else "0", den.pretty("x"))
    assert to_ratfunc(text) == RatFunc(num, den)
    assert expand_univariate(parse_expr(text, 1), 8) == RatFunc(num, den).to_series(8)


def test_mseries_inverse_and_diagonal():
    bounds = (6, 6)
    one = MSeries.const(2, bounds, 1)
    x, y = MSeries.var(2, bounds, 0), MSeries.var(2, bounds, 1)
    f = (one - x - y).inverse()
    assert [f.coeff((n, n)) for n in range(6)] == [comb(2 * n, n) for n in range(6)]
    assert f.diagonal(5).coeffs == [Q(comb(2 * n, n)) for n in range(6)]
