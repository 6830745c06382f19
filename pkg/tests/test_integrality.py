from math import prod

import pytest
from hypothesis import given, strategies as st

from diagkit.dfinite import LinDiffOp
from diagkit.expr import expand_univariate, parse_expr
from diagkit.integrality import (GLOBALLY_BOUNDED, INCONCLUSIVE, LIKELY_NOT, IntegralityVerdict,
                                 apply_then_check, denominator_profile, factor_integer,
                                 find_rescaling, log_bounded_check, rescaled)
from diagkit.rational import Q
from diagkit.series import USeries


def series(text, T=30):
    return expand_univariate(parse_expr(text, 1), T)


def exp_series(T):
    return USeries.x(T).exp()


def harmonic(T):
    return -(USeries.one(T) - USeries.x(T)).log()


@given(st.integers(1, 10 ** 9))
def test_factor_integer_reconstructs(m):
    primes, opaque = factor_integer(m)
    assert not opaque
    assert prod(p ** e for p, e in primes.items()) == m


def test_factor_integer_leaves_large_composites_opaque():
    big = 1000003 * 1000033
    primes, opaque = factor_integer(2 * big, trial_bound=1000)
    assert primes == {2: 1} and opaque == [big]


def test_square_root_needs_four():
    v = find_rescaling(series("(1-x)^(-1/2)"))
    assert v.kind == GLOBALLY_BOUNDED and v.N == 4


def test_cube_roots_need_powers_of_three():
    v = find_rescaling(series("(1-x)^(-1/3) * (1-x)^(-2/3) + (1-x)^(-1/3)"))
    assert v.kind == GLOBALLY_BOUNDED and v.N % 3 == 0


def test_logarithm_is_likely_not():
    v = find_rescaling(exp_series(40))
    assert v.kind == LIKELY_NOT
    assert len(v.witnesses) >= 5
    assert "witness" in str(v)


def test_leading_zeros_are_skipped():
    # 1/4 sits at index 3, so 2^3 already clears it
    v = find_rescaling(USeries([0, 0, 3, Q(3, 4)], 3))
    assert v.kind == GLOBALLY_BOUNDED and v.N == 2


def test_zero_series_has_empty_profile():
    assert denominator_profile(USeries([0, 0], 1)) == ({}, {}, [])


def test_opaque_cofactor_is_inconclusive():
    big = 1000003 * 1000033
    v = find_rescaling(USeries([1, Q(1, big), 0, 0, 0, 0, 0, 0, 0], 8), trial_bound=100)
    assert v.kind in (INCONCLUSIVE, LIKELY_NOT) and big in v.opaque


@given(st.integers(-12, 12).filter(bool), st.sampled_from(["1/2", "-1/2", "1/3", "-2/3", "3/4"]))
def test_binomial_series_rescale_to_integers(a, r):
    f = series("(1 - (%d)*x)^(%s)" % (a, r), 24)
    v = find_rescaling(f)
    assert v.kind == GLOBALLY_BOUNDED
    assert all(Q(c).denominator == 1 for c in rescaled(f, v.N))
    for p in v.primes:
        assert any(Q(c).denominator != 1 for c in rescaled(f, v.N // p))


@given(st.integers(-12, 12).filter(bool), st.sampled_from(["1/2", "-1/3", "3/4"]))
def test_verdict_json_roundtrip(a, r):
    v = find_rescaling(series("(1 - (%d)*x)^(%s)" % (a, r), 16))
    w = IntegralityVerdict.from_json(v.to_json())
    assert w == v


def test_likely_not_json_roundtrip():
    v = find_rescaling(exp_series(30))
    assert IntegralityVerdict.from_json(v.to_json()) == v


def test_log_bounded():
    assert all(log_bounded_check(harmonic(40), [2, 3, 5, 7]).values())
    assert not log_bounded_check(exp_series(40), [2])[2]


def test_apply_then_check_theta():
    f = harmonic(20)
    g, v = apply_then_check(LinDiffOp.from_theta_text("theta"), f)
    assert g == series("x/(1-x)", 20)
    assert v.kind == GLOBALLY_BOUNDED and v.N == 1
    with pytest.raises(ValueError):
        apply_then_check(LinDiffOp.from_theta_text("theta^2"), f)
