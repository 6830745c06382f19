from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from diagkit.catalog import B2, hyp_4f3_half, named_operator
from diagkit.dfinite import (LinDiffOp, OperatorError, adjoint, analytic_solution, apply_to_ratfunc,
                             atkin_identity, bounded_rational_solutions, compose, conjugate_op,
                             exterior_square, exterior_square_order, frobenius_solutions,
                             gauge_exponent, guess_ode, heun_op, heun_series, hypergeometric_op,
                             indicial_exponents, is_mum, pfq_series, pullback_op, symmetric_square)
from diagkit.poly import RatFunc, UPoly
from diagkit.rational import Q
from diagkit.series import USeries

small = st.integers(-4, 4)
polys = st.lists(small, min_size=1, max_size=3).map(UPoly)
nonzero_polys = polys.filter(bool)
params = st.fractions(min_value=Fraction(1, 6), max_value=3, max_denominator=6).map(Q)


@st.composite
def operators(draw, max_order=3):
    r = draw(st.integers(1, max_order))
    cs = [draw(polys) for _ in range(r)] + [draw(nonzero_polys)]
    return LinDiffOp(cs)


def pullback_maps():
    # x + c x^2 or x/(1 + c x)
    return st.tuples(st.integers(-3, 3).filter(bool), st.booleans()).map(
        lambda t: RatFunc(UPoly((0, 1, t[0]))) if t[1] else RatFunc(UPoly((0, 1)), UPoly((1, t[0]))))


generic = st.lists(st.integers(-5, 5), min_size=12, max_size=12).map(lambda cs: USeries(cs, 11))


# --- operator algebra -------------------------------------------------------------

@given(operators())
def test_adjoint_is_an_involution(L):
    assert adjoint(adjoint(L)) == L


@given(operators(2), operators(2))
def test_adjoint_reverses_products(A, B):
    assert adjoint(compose(A, B)) == compose(adjoint(B), adjoint(A))


@given(operators(2), operators(2), generic)
def test_composition_acts_as_composition(A, B, f):
    assert compose(A, B).apply(f) == A.apply(B.apply(f))


@given(operators(), st.lists(small, min_size=1, max_size=3), st.lists(small, min_size=1, max_size=2))
def test_ratfunc_action_matches_series(L, num, den):
    f = RatFunc(UPoly(num), UPoly([1] + den))
    g = apply_to_ratfunc(L, f)
    T = 10
    assert g.to_series(T - L.order) == L.apply(f.to_series(T)).truncate(T - L.order)


@settings(deadline=None)
@given(operators(), st.lists(small, min_size=1, max_size=2), st.lists(small, min_size=1, max_size=2).filter(any))
def test_conjugation_inverts(L, num, den):
    r = RatFunc(UPoly(num), UPoly(den))
    assert conjugate_op(conjugate_op(L, r), -r).equivalent(L)


@settings(deadline=None, max_examples=25)
@given(operators(2), pullback_maps(), pullback_maps())
def test_pullback_composes(L, p, q):
    assert pullback_op(pullback_op(L, p), q).equivalent(pullback_op(L, p.compose(q)))


@given(operators())
def test_json_and_text_roundtrips(L):
    assert LinDiffOp.from_json(L.to_json()) == L
    assert LinDiffOp.from_json({"d_text": L.pretty()}) == L


def test_theta_text():
    L = LinDiffOp.from_theta_text("t^2 - x*(2*t+1)^2")
    assert L.pretty_theta() == "(t^2) + x*(-1 - 4*t - 4*t^2)"
    assert LinDiffOp.from_theta_text("t") == LinDiffOp([UPoly(), UPoly.x()])


# --- special functions -----------------------------------------------------------

@settings(deadline=None, max_examples=30)
@given(st.lists(params, min_size=1, max_size=3), st.lists(params, max_size=2), st.integers(-30, 30).filter(bool))
def test_hypergeometric_operator_annihilates_series(upper, lower, scale):
    L = hypergeometric_op(upper, lower + [1][:max(0, len(upper) - len(lower) - 1)], scale)
    f = pfq_series(upper, lower + [1][:max(0, len(upper) - len(lower) - 1)], scale, 20)
    assert L.annihilates(f)


@settings(deadline=None, max_examples=30)
@given(params, params, params, params, st.integers(2, 9), st.integers(-5, 5))
def test_heun_operator_annihilates_series(alpha, beta, gamma, delta, a, qq):
    f = heun_series(a, qq, alpha, beta, gamma, delta, 1, 16)
    assert heun_op(a, qq, alpha, beta, gamma, delta).annihilates(f)
    g = heun_series(a, qq, alpha, beta, gamma, delta, -3, 16)
    assert heun_op(a, qq, alpha, beta, gamma, delta, -3).annihilates(g)


@settings(deadline=None, max_examples=20)
@given(st.lists(params, min_size=2, max_size=2), st.integers(-20, 20).filter(bool), pullback_maps())
def test_pullback_annihilates_composed_solution(upper, scale, p):
    L = hypergeometric_op(upper, [1], scale)
    f = pfq_series(upper, [1], scale, 14)
    assert pullback_op(L, p).annihilates(f.compose(p.to_series(14)))


@settings(deadline=None, max_examples=20)
@given(st.lists(params, min_size=2, max_size=2), st.integers(-3, 3).filter(bool))
def test_conjugation_multiplies_solutions(upper, c):
    # rho = 1/(1 - c x), rho'/rho = c/(1 - c x)
    L = hypergeometric_op(upper, [1], 4)
    f = pfq_series(upper, [1], 4, 14)
    rho = RatFunc(UPoly.const(1), UPoly((1, -c)))
    r = RatFunc(UPoly.const(c), UPoly((1, -c)))
    assert conjugate_op(L, r).annihilates(f * rho.to_series(14))


@settings(deadline=None, max_examples=15)
@given(st.lists(params, min_size=2, max_size=3), st.integers(-12, 12).filter(bool))
def test_guess_recovers_hypergeometric(upper, scale):
    lower = [1] * (len(upper) - 1)
    f = pfq_series(upper, lower, scale, 45)
    rep = guess_ode(f, 3, 2)
    assert rep.found and rep.order <= len(upper)
    assert rep.operator.annihilates(f)
    assert rep.operator.equivalent(hypergeometric_op(upper, lower, scale)) or rep.order < len(upper)


def test_guess_gives_up_on_exp_of_exp():
    f = (USeries.x(40).exp() - USeries.one(40)).exp()
    assert not guess_ode(f, 2, 2).found


def test_guess_needs_terms():
    with pytest.raises(OperatorError):
        guess_ode(USeries([1, 1, 1], 2), 2, 2)


# --- local data ----------------------------------------------------------------------

def test_indicial_data_and_mum():
    L = B2()
    assert indicial_exponents(L)[0] == [0] * 4
    assert is_mum(L, strict=True)
    shifted = conjugate_op(L, gauge_exponent(Q(1, 2)))
    assert indicial_exponents(shifted)[0] == [Q(1, 2)] * 4
    assert is_mum(shifted) and not is_mum(shifted, strict=True)
    assert not is_mum(hypergeometric_op([Q(1, 2)], [Q(1, 3)]))


def test_frobenius_basis_is_annihilated_on_the_log_free_part():
    L = B2()
    sols = frobenius_solutions(L, 10)
    assert [s.log_degree for s in sols] == [0, 1, 2, 3]
    assert L.annihilates(sols[0].logs[0])
    assert sols[0].logs[0] == analytic_solution(L, 10)


def test_squares():
    L = hyp_4f3_half()
    assert exterior_square(L).order == 5 == exterior_square_order(L)
    two = hypergeometric_op([Q(1, 2), Q(1, 2)], [1], 16)
    assert symmetric_square(two).order == 3
    assert exterior_square(two).order == 1
    f = pfq_series([Q(1, 2), Q(1, 2)], [1], 16, 20)
    assert symmetric_square(two).annihilates(f * f)


def test_rational_solutions():
    # (1 - x) D + 1 kills 1 - x
    L = LinDiffOp([UPoly.const(1), UPoly((1, -1))])
    sols = bounded_rational_solutions(L, 2)
    assert len(sols) == 1 and apply_to_ratfunc(L, sols[0]).is_zero()
    # (1 - x)^(-1/2) is not rational
    assert bounded_rational_solutions(hypergeometric_op([Q(1, 2)], [], 1), 3) == []


@pytest.mark.parametrize("name,A,e", [("omega4", 256, Q(1, 2)), ("H4,4", 65536, Q(1, 2))])
def test_atkin_identity(name, A, e):
    L = named_operator(name)
    assert atkin_identity(L, A, e)
    assert not atkin_identity(L, 2 * A, e)
    assert not atkin_identity(L, A, e + 1)


def test_constant_pullback_rejected():
    with pytest.raises(OperatorError):
        pullback_op(B2(), RatFunc(UPoly.const(3)))


@given(operators(2))
def test_first_order_exterior_square_rejected(L):
    assume(L.order == 1)
    with pytest.raises(OperatorError):
        exterior_square(L)
