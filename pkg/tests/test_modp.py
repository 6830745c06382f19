from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from diagkit.dfinite import pfq_series
from diagkit.expr import expand_univariate, parse_expr
from diagkit.modp import (AlgRelation, FpSeries, InsufficientTerms, ReductionError, hasse_poly,
                          minpoly_mod_p, reduce_mod_p)
from diagkit.poly import UPoly
from diagkit.rational import Q, is_probable_prime
from diagkit.series import USeries

odd_primes = st.sampled_from([p for p in range(3, 200) if is_probable_prime(p)])


@given(odd_primes)
def test_hasse_is_truncated_hypergeometric(p):
    # C((p-1)/2, n) = C(2n, n) (-1/4)^n mod p
    h = (p - 1) // 2
    assert hasse_poly(p) == UPoly([comb(2 * n, n) ** 2 % p for n in range(h + 1)])
    f = pfq_series([Q(1, 2), Q(1, 2)], [1], 16, h)
    assert list(reduce_mod_p(f, p).coeffs) == [comb(2 * n, n) ** 2 % p for n in range(h + 1)]


def test_hasse_rejects_two():
    with pytest.raises(ValueError):
        hasse_poly(2)


def test_reduction_error():
    with pytest.raises(ReductionError):
        reduce_mod_p(USeries([1, Q(1, 6)], 1), 3)
    assert reduce_mod_p(USeries([1, Q(1, 6)], 1), 5).coeffs == (1, 1)


@given(odd_primes, st.lists(st.integers(0, 10 ** 6), min_size=5, max_size=5),
       st.lists(st.integers(0, 10 ** 6), min_size=5, max_size=5))
def test_fp_series_power(p, a, b):
    f, g = FpSeries(p, tuple(x % p for x in a)), FpSeries(p, tuple(x % p for x in b))
    assert (f * g) * f == f.power(2) * g


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([5, 7, 11, 13]), st.integers(-5, 5), st.integers(-5, 5))
def test_square_roots_have_quadratic_relations(p, a, b):
    f = expand_univariate(parse_expr("(1 + (%d)*x + (%d)*x^2)^(1/2)" % (a, b), 1), 40)
    fp = reduce_mod_p(f, p)
    rel = minpoly_mod_p(fp, 2, 2)
    assert rel is not None and rel.y_degree <= 2
    assert rel.evaluate(fp) == [0] * 41
    assert AlgRelation.from_json(rel.to_json()) == rel
    assert rel.pretty().endswith("(mod %d)" % p)


def test_central_binomial_mod_three():
    fp = reduce_mod_p(expand_univariate(parse_expr("(1-4*x)^(-1/2)", 1), 40), 3)
    rel = minpoly_mod_p(fp, 2, 2)
    # (1 - 4x) y^2 = 1 holds over Q, and mod 3 (1-x) y^2 - 1
    assert rel.y_degree == 2 and rel.x_degree == 1
    assert rel.evaluate(fp) == [0] * 41


def test_transcendental_has_no_small_relation():
    e = reduce_mod_p(USeries.x(60).exp(), 61)
    assert minpoly_mod_p(e, 3, 3) is None


def test_insufficient_terms():
    with pytest.raises(InsufficientTerms):
        minpoly_mod_p(reduce_mod_p(USeries([1, 1], 5), 5), 4, 4)
