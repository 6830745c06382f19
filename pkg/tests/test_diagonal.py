from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from diagkit.diagonal import (BinomFactor, BinomSumSpec, DiagonalCertificate, DiagonalError,
                              binom_sum_to_rational, diagonal, diagonal_bruteforce,
                              furstenberg_bivariate, general_product, hadamard, hurwitz,
                              phi_d_diagonal, phi_d_oracle)
from diagkit.expr import parse_expr
from diagkit.poly import MPoly
from diagkit.rational import Q
from diagkit.series import USeries

coef = st.integers(-3, 3)


def _linear_form(nvars, cs):
    return " + ".join("(%d)*z%d" % (c, i) for i, c in enumerate(cs[:nvars]) if c) or "0"


@st.composite
def rational_functions(draw, nvars):
    # 1/(1 - linear) * (1 - quadratic)^e, numerator polynomial
    lin = draw(st.lists(coef, min_size=nvars, max_size=nvars))
    mons = ["z%d*z%d" % (i, j) for i in range(nvars) for j in range(i, nvars)]
    quad = draw(st.lists(coef, min_size=len(mons), max_size=len(mons)))
    qtxt = " + ".join("(%d)*%s" % (c, m) for c, m in zip(quad, mons) if c) or "0"
    num = draw(st.lists(coef, min_size=nvars + 1, max_size=nvars + 1))
    ntxt = "%d + %s" % (num[0], _linear_form(nvars, num[1:]))
    e = draw(st.sampled_from(["1", "2", "1/2", "-1/3"]))
    return "(%s)/((1 - (%s)) * (1 - (%s))^(%s))" % (ntxt, _linear_form(nvars, lin), qtxt, e)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), rational_functions(n))))
def test_diagonal_matches_full_expansion(case):
    nvars, text = case
    T = 6 if nvars == 3 else 9
    assert diagonal(text, nvars, T) == diagonal_bruteforce(text, nvars, T)


def test_classical_diagonals():
    assert diagonal("1/(1 - z0 - z1)", 2, 10).coeffs == [comb(2 * n, n) for n in range(11)]
    assert diagonal("1/(1 - z0 - z1 - z2)", 3, 8).coeffs == [
        Q(comb(3 * n, n) * comb(2 * n, n)) for n in range(9)]
    apery = [sum(comb(n, k) ** 2 * comb(n + k, k) ** 2 for k in range(n + 1)) for n in range(5)]
    four = "1/((1-z0-z1)*(1-z2-z3) - z0*z1*z2*z3)"
    assert diagonal(four, 4, 4).coeffs == apery


def test_diagonal_errors():
    with pytest.raises(DiagonalError):
        diagonal(parse_expr("3", 0), 0, 4)


# --- products ---------------------------------------------------------------------

series = st.lists(st.integers(-9, 9), min_size=9, max_size=9).map(lambda cs: USeries(cs, 8))


@given(series, series)
def test_hadamard_is_symmetric_and_termwise(f, g):
    h = hadamard(f, g)
    assert h == hadamard(g, f)
    assert all(h[n] == f[n] * g[n] for n in range(9))


@given(series, series)
def test_general_product_specialisations(f, g):
    assert general_product(f, g, "1/(1 - z0 - z1)") == hurwitz(f, g)
    assert general_product(f, g, "1/((1 - z0)*(1 - z1))") == f * g


@given(series, series, series)
def test_hurwitz_is_associative(f, g, h):
    assert hurwitz(hurwitz(f, g), h) == hurwitz(f, hurwitz(g, h))


# --- algebraic series ----------------------------------------------------------

def test_furstenberg_catalan():
    # y = x (1 + y)^2, shifted Catalan numbers
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    P = y - x * (MPoly.const(2, 1) + y) ** 2
    branch = USeries([0] + [comb(2 * n + 2, n + 1) // (n + 2) for n in range(11)], 11)
    expr = furstenberg_bivariate(P, branch)
    assert diagonal(expr, 2, 11) == branch


def test_furstenberg_needs_shift():
    # y^2 = x^2 (1 + x): P_y(0,0) = 0, handled by the two-term shift
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    P = y * y - x * x * (MPoly.const(2, 1) + x)
    branch = (USeries.one(10) + USeries.x(10)).nth_root(2).shift(1).truncate(10)
    expr = furstenberg_bivariate(P, branch)
    assert diagonal(expr, 2, 10) == branch


def test_furstenberg_rejects_non_roots():
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    with pytest.raises(DiagonalError):
        furstenberg_bivariate(y - x, USeries([0, 2], 5))


# --- binomial sums ----------------------------------------------------------------

def _direct(spec, T):
    out = []
    for n in range(T + 1):
        ks = [0] if spec.depth == 0 else range(n // spec.div + 1)
        total = Q(0)
        for k in ks:
            v = Q(spec.c) ** (spec.a * n + spec.b * k)
            if spec.sign_k and k % 2:
                v = -v
            for f in spec.factors:
                v *= Q(comb(f.top[0] * n + f.top[1] * k, f.bot[0] * n + f.bot[1] * k)) ** f.pow
            total += v
        out.append(total)
    return out


binom_specs = st.builds(
    BinomSumSpec,
    st.lists(st.builds(BinomFactor,
                       st.sampled_from([(1, 0), (1, 1), (2, 0), (1, 0)]),
                       st.sampled_from([(0, 1), (1, 0)]),
                       st.integers(1, 2)), min_size=1, max_size=2),
    st.just(1), st.sampled_from([1, 2, Q(-1)]), st.integers(0, 1), st.integers(0, 1), st.booleans(),
    st.integers(1, 2))


@settings(max_examples=30, deadline=None)
@given(binom_specs)
def test_binom_spec_series_matches_direct_sum(spec):
    try:
        s = spec.series(7)
    except DiagonalError:
        return
    assert s.coeffs == _direct(spec, 7)
    assert BinomSumSpec.from_json(spec.to_json()).series(7) == s


def test_binom_to_rational_franel():
    spec = BinomSumSpec([BinomFactor((1, 0), (0, 1), 3)])
    cert = binom_sum_to_rational(spec, T=6)
    assert cert.verify()
    assert cert.series.coeffs[:5] == [1, 2, 10, 56, 346]
    tampered = DiagonalCertificate(cert.expr, cert.nvars, cert.series + USeries.x(6), cert.placements)
    assert not tampered.verify()


def test_binom_to_rational_rejects_depth():
    with pytest.raises(DiagonalError):
        binom_sum_to_rational(BinomSumSpec([BinomFactor((1, 0), (0, 1))], depth=2))


# --- Laurent-variable diagonal ---------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3, 4])
def test_phi_d_two_routes(n):
    assert phi_d_diagonal(n, 7) == phi_d_oracle(n, 7)


def test_phi_d_rejects_small_n():
    with pytest.raises(DiagonalError):
        phi_d_diagonal(1, 4)
