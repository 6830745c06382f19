import pytest
from hypothesis import given, settings, strategies as st

from diagkit.catalog import _HEUN, _PULLBACK, B2, calB2, hyp_4f3_half, omega
from diagkit.dfinite import (OperatorError, atkin_identity, conjugate_op, hypergeometric_op, pullback_op,
                             symmetric_square)
from diagkit.modularity import (CYReport, IdentityError, NotMumError, adjoint_yukawa, calabi_yau_report,
                                curve_from_text, frobenius_mum_basis, identity_check, kn_invariants,
                                mirror_map, modular_curve_check, morrison_yukawa, nome, schwarzian,
                                schwarzian_pair_check, self_adjoint_condition, side_series, yukawa)
from diagkit.expr import to_ratfunc
from diagkit.poly import RatFunc, UPoly
from diagkit.rational import Q
from diagkit.series import USeries

T = 8


def q_coeffs(s, n):
    return [s[i] for i in range(n)]


# --- MUM data -----------------------------------------------------------------------

def test_nome_and_mirror_are_inverse():
    L = B2()
    qn, xq = nome(L, T), mirror_map(L, T)
    n = min(qn.trunc, xq.trunc)
    qn, xq, x = qn.truncate(n), xq.truncate(n), USeries.x(n)
    assert qn.compose(xq) == x and xq.compose(qn) == x


def test_b2_three_routes_agree():
    L = B2()
    y = yukawa(L, T, check=True)
    assert q_coeffs(y.K_q, 5) == [1, 4, 164, 5800, 196772]
    assert morrison_yukawa(L, T)[1] == y.K_q.truncate(morrison_yukawa(L, T)[1].trunc)
    ks = adjoint_yukawa(L, T)
    assert ks.truncate(y.K_q.trunc) == y.K_q.truncate(ks.trunc)
    assert self_adjoint_condition(L, T)


def test_adjoint_yukawa_differs_without_self_adjointness():
    L = calB2()
    assert not self_adjoint_condition(L, T)
    assert adjoint_yukawa(L, T)[1] != yukawa(L, T).K_q[1]


@settings(deadline=None, max_examples=6)
@given(st.integers(-6, 6).filter(bool), st.integers(-3, 3))
def test_determinants_are_conjugation_invariant(c, d):
    # rho = (1 - c x)^(-1) (1 + d x)^2 has rho(0) = 1, so the conjugate stays MUM at 0
    L = B2()
    r = RatFunc(UPoly.const(c), UPoly((1, -c))) + RatFunc(UPoly.const(2 * d), UPoly((1, d)))
    M = conjugate_op(L, r)
    assert yukawa(M, 6).K_q == yukawa(L, 6).K_q
    assert adjoint_yukawa(M, 6) == adjoint_yukawa(L, 6)
    assert nome(M, 6) == nome(L, 6)


def test_symmetric_square_has_trivial_k3():
    two = omega(4)
    S = symmetric_square(two)
    assert S.order == 3
    K = kn_invariants(S, 10)
    assert K[3] == USeries.one(K[3].trunc)


def test_hypergeometric_k_invariants():
    K = kn_invariants(hyp_4f3_half(), 6)
    assert sorted(K) == [3, 4]
    assert K[3] == yukawa(hyp_4f3_half(), 6).K_q.truncate(K[3].trunc)


def test_not_mum_and_low_order_errors():
    with pytest.raises(NotMumError):
        frobenius_mum_basis(hypergeometric_op([Q(1, 2)] * 4, [Q(1, 3), 1, 1], 256), 6)
    with pytest.raises(OperatorError):
        yukawa(omega(4), 6)
    with pytest.raises(OperatorError):
        morrison_yukawa(symmetric_square(omega(4)), 6)


def test_calabi_yau_report():
    rep = calabi_yau_report(B2(), trunc=16)
    assert rep.calabi_yau and rep.ext2_order == 5
    assert rep.y0_verdict.N == 1 and rep.nome_verdict.kind == "GloballyBoundedWith"
    js = rep.to_json()
    assert js["calabi_yau"] is True and js["ext2_order"] == 5
    assert not CYReport(False).calabi_yau


# --- Atkin constant ---------------------------------------------------------------------

def _omega5(a):
    P, e, _ = _PULLBACK[5]
    Pa = P.scale_var(a)
    L = pullback_op(_HEUN[5], RatFunc(UPoly((0, a)), Pa))
    return conjugate_op(L, RatFunc(Pa.derivative() * (-e), Pa))


def test_omega5_rescaling_moves_the_atkin_constant():
    assert atkin_identity(_omega5(1000), 2 ** 6 * 5 ** 3, Q(1, 2))
    small = _omega5(500)
    assert atkin_identity(small, 2 ** 4 * 5 ** 3, Q(1, 2))
    assert not atkin_identity(small, 2 ** 6 * 5 ** 3, Q(1, 2))


# --- Schwarzian and curves -----------------------------------------------------------

def test_schwarzian_of_moebius_vanishes():
    f = to_ratfunc("(2*x+1)/(3-x)")
    assert schwarzian(f).is_zero()
    assert schwarzian(f.to_series(12)).is_zero()


@settings(deadline=None, max_examples=25)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=3), st.lists(st.integers(-4, 4), max_size=2))
def test_schwarzian_pair_is_reflexive(num, den):
    p = RatFunc(UPoly([0, 1] + num), UPoly([1] + den))
    assert schwarzian_pair_check(p, p)
    assert schwarzian_pair_check(p.to_series(14), p)


def test_schwarzian_pair_separates():
    assert schwarzian_pair_check(to_ratfunc("27*x^3"), to_ratfunc("1-((1-3*x)/(1+6*x))^3"))
    assert not schwarzian_pair_check(to_ratfunc("27*x/(1+4*x)^3"), to_ratfunc("x^2"))


def test_curve_checks():
    phi = curve_from_text("u*v - 1")
    assert modular_curve_check(phi, to_ratfunc("x/(1+x)"), to_ratfunc("(1+x)/x"))
    assert not modular_curve_check(phi, to_ratfunc("x"), to_ratfunc("x"))
    u = USeries.x(20)
    v = to_ratfunc("x/(1-x)").to_series(20)
    check = modular_curve_check("u - v + u*v", u, v)
    assert check and check.matched == 21 and check.required == 8
    short = modular_curve_check("u - v + u*v", USeries.x(3), to_ratfunc("x/(1-x)").to_series(3))
    assert not short and short.matched == 4


# --- identities with radicals ---------------------------------------------------------

def sqrt_term(expr, coef=1):
    return {"coef": coef, "factors": [{"expr": expr, "pow": "1/2"}]}


def test_radical_constants():
    lhs = [sqrt_term("5+3*x")]
    assert identity_check(lhs, [{"factors": [{"expr": "5", "pow": "1/2"}, {"expr": "1+3*x/5", "pow": "1/2"}]}])
    assert not identity_check(lhs, [sqrt_term("1+3*x/5")])
    assert identity_check([sqrt_term("20+12*x")], [sqrt_term("5+3*x", 2)])
    with pytest.raises(IdentityError):
        side_series(lhs)
    with pytest.raises(IdentityError):
        identity_check([sqrt_term("-5+x")], lhs)


@settings(deadline=None, max_examples=25)
@given(st.integers(1, 60), st.integers(-9, 9))
def test_radical_bookkeeping_is_consistent(c, k):
    lhs = [{"factors": [{"expr": "%d*(%d+(%d)*x)" % (c * c, c, k), "pow": "1/2"}]}]
    rhs = [{"coef": c, "factors": [{"expr": "%d+(%d)*x" % (c, k), "pow": "1/2"}]}]
    assert identity_check(lhs, rhs)


def test_hypergeometric_identity_and_misprint():
    two = {"pFq": [["1/2", "1/2"], [1]]}
    lhs = [{"factors": [dict(two, arg="16*x*(1-4*x)")]}]
    rhs = [{"factors": [{"expr": "1-4*x", "pow": "-1"}, dict(two, arg="16*x^2/(1-4*x)^2")]}]
    assert identity_check(lhs, rhs)
    wrong = [{"factors": [{"expr": "1-4*x", "pow": "-1/2"}, dict(two, arg="16*x^2/(1-4*x)^2")]}]
    assert not identity_check(lhs, wrong)
