import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from dprisk.errors import DomainError
from dprisk.risk_bounds import (
    ProbabilityInterval,
    SymmetricBound,
    combined_worst_case,
    diff_interval,
    diff_magnitude,
    epsilon_for_diff,
    epsilon_for_posterior,
    epsilon_for_ratio,
    posterior_interval,
    ratio_interval,
    worst_case_priors_diff,
)

EPS_41 = 0.100019048383244      # (0.1, 1e-7) at delta' = 0.01
EPS_44 = 1.800233079233849      # (1.8, 1e-5) at delta' = 0.05
PRIOR_GRID = [i / 1000 for i in range(1, 1000)]

eps_st = st.floats(0.0, 12.0)
prior_st = st.floats(0.0, 1.0)


def test_posterior_interval_walkthrough():
    iv = posterior_interval(EPS_41, 0.01, 0.5)
    assert (iv.lower, iv.upper) == pytest.approx((0.475016, 0.524984), abs=1e-6)
    assert iv.confidence == pytest.approx(0.99)


@pytest.mark.parametrize("eps,p", [(EPS_44, 0.5), (EPS_44, 0.1), (0.3, 0.9), (5.0, 1e-4)])
def test_posterior_interval_matches_oracle(eps, p):
    iv = posterior_interval(eps, 0.05, p)
    lo, hi = oracles.posterior_bounds(eps, p)
    assert iv.lower == pytest.approx(lo, rel=1e-13)
    assert iv.upper == pytest.approx(hi, rel=1e-13)


def test_posterior_interval_report_priors():
    assert posterior_interval(EPS_44, 0.05, 0.5).upper == pytest.approx(0.85818, abs=1e-5)
    assert posterior_interval(EPS_44, 0.05, 0.1).upper == pytest.approx(0.40204, abs=1e-5)


def test_posterior_interval_degenerate_priors():
    iv = posterior_interval(3.0, 0.2, 0.0)
    assert (iv.lower, iv.upper) == (0.0, 0.0)
    iv = posterior_interval(3.0, 0.2, 1.0)
    assert (iv.lower, iv.upper) == (1.0, 1.0)


@given(eps_st, prior_st)
def test_posterior_interval_brackets_prior(eps, p):
    iv = posterior_interval(eps, 0.0, p)
    assert 0.0 <= iv.lower <= p <= iv.upper <= 1.0


@given(st.floats(0.0, 6.0), st.floats(0.0, 6.0), st.floats(0.001, 0.999))
def test_posterior_interval_nested_in_epsilon(e1, e2, p):
    a, b = sorted((e1, e2))
    small, big = posterior_interval(a, 0.0, p), posterior_interval(b, 0.0, p)
    assert big.lower <= small.lower + 1e-15 and small.upper <= big.upper + 1e-15


def test_ratio_interval():
    r = ratio_interval(EPS_41, 0.01)
    assert (r.lower, r.upper) == pytest.approx((0.9048, 1.1052), abs=1e-4)
    r0 = ratio_interval(0.0, 0.3)
    assert (r0.lower, r0.upper) == (1.0, 1.0)
    assert ratio_interval(EPS_44, 0.05).upper == pytest.approx(6.0511, abs=1e-4)


def test_ratio_envelope_attained_near_zero_prior():
    for eps in (0.1, 1.0, 2.0):
        ups = [posterior_interval(eps, 0.0, p).upper / p for p in PRIOR_GRID]
        assert max(ups) <= math.exp(eps) * (1 + 1e-12)
        # the gap at p is about p (e^eps - 1), so it closes as p -> 0
        assert ups[0] == pytest.approx(math.exp(eps), rel=1e-2)
        assert posterior_interval(eps, 0.0, 1e-7).upper / 1e-7 == pytest.approx(math.exp(eps), rel=1e-6)


def test_diff_magnitude():
    assert diff_magnitude(EPS_41) == pytest.approx(0.0250, abs=1e-4)
    assert diff_magnitude(0.0) == 0.0
    assert diff_magnitude(EPS_44) == pytest.approx(oracles.diff_magnitude(EPS_44), rel=1e-13)
    assert diff_magnitude(1.8002) == pytest.approx(0.42194, abs=1e-5)
    d = diff_interval(2.0, 0.01)
    assert (d.lower, d.upper) == pytest.approx((-0.46212, 0.46212), abs=1e-5)


@given(st.floats(0.0, 8.0))
def test_diff_magnitude_is_sup_over_priors(eps):
    best = max(max(posterior_interval(eps, 0.0, p).upper - p,
                   p - posterior_interval(eps, 0.0, p).lower) for p in PRIOR_GRID)
    assert best <= diff_magnitude(eps) + 1e-12


def test_worst_case_priors():
    assert worst_case_priors_diff(2.0) == pytest.approx((0.26894, 0.73106), abs=1e-5)
    assert worst_case_priors_diff(0.0) == (0.5, 0.5)
    assert worst_case_priors_diff(1.8002) == pytest.approx((0.28903, 0.71097), abs=1e-5)


@given(st.floats(0.01, 8.0))
def test_worst_case_prior_attains_diff_magnitude(eps):
    inc, dec = worst_case_priors_diff(eps)
    assert posterior_interval(eps, 0.0, inc).upper - inc == pytest.approx(diff_magnitude(eps), abs=1e-12)
    assert dec - posterior_interval(eps, 0.0, dec).lower == pytest.approx(diff_magnitude(eps), abs=1e-12)


def test_inversions():
    assert epsilon_for_diff(0.2) == pytest.approx(0.81093, abs=1e-5)
    assert epsilon_for_diff(1e-12) == pytest.approx(4e-12)
    assert epsilon_for_diff(diff_magnitude(1.8002)) == pytest.approx(1.8002, abs=1e-12)
    assert epsilon_for_ratio(math.e) == pytest.approx(1.0)
    assert epsilon_for_ratio(1.1052) == pytest.approx(0.100026, abs=1e-6)
    assert epsilon_for_ratio(6.0507) == pytest.approx(1.8002, abs=1e-4)
    with pytest.raises(DomainError):
        epsilon_for_diff(1.0)
    with pytest.raises(DomainError):
        epsilon_for_ratio(1.0)
    with pytest.raises(DomainError):
        epsilon_for_posterior(0.5, 0.4)


@given(st.floats(1e-6, 20.0))
def test_inversions_round_trip(eps):
    assert epsilon_for_diff(diff_magnitude(eps)) == pytest.approx(eps, rel=1e-9)
    assert epsilon_for_ratio(math.exp(eps)) == pytest.approx(eps, rel=1e-12)


@given(st.floats(1e-4, 8.0), st.floats(0.01, 0.99))
def test_posterior_inversion_round_trip(eps, p):
    up = posterior_interval(eps, 0.0, p).upper
    if up >= 1.0:
        return
    assert epsilon_for_posterior(p, up) == pytest.approx(eps, rel=1e-7, abs=1e-9)


def test_combined_worst_case():
    assert combined_worst_case(EPS_44, 0.05, 0.5).ratio_max == pytest.approx(1.7163546, abs=1e-6)
    assert combined_worst_case(EPS_44, 0.05, 0.1).ratio_max == pytest.approx(4.0203546, abs=1e-6)
    wc = combined_worst_case(0.7, 0.01, 0.5)
    iv = posterior_interval(0.7, 0.01, 0.5)
    assert iv.upper - 0.5 == pytest.approx(0.5 - iv.lower, abs=1e-15)
    assert wc.diff_max == pytest.approx(iv.upper - 0.5, abs=1e-15)
    assert wc.confidence == pytest.approx(0.99)
    with pytest.raises(DomainError):
        combined_worst_case(1.0, 0.0, 0.0)


@given(st.floats(0.0, 6.0), st.floats(0.001, 0.999))
def test_combined_ratio_is_max_of_orientations(eps, p):
    lo, hi = oracles.posterior_bounds(eps, p)
    expected = max(hi / p, (1 - lo) / (1 - p))
    assert combined_worst_case(eps, 0.0, p).ratio_max == pytest.approx(expected, rel=1e-10)
    assert combined_worst_case(eps, 0.0, p).ratio_max <= math.exp(eps) * (1 + 1e-12)


def test_symmetric_bound_posterior_view():
    band = SymmetricBound(0.3, "difference")
    iv = band.posterior_interval(0.9)
    assert (iv.lower, iv.upper) == pytest.approx((0.6, 1.0))
    ratio = SymmetricBound(2.0, "ratio")
    assert ratio.posterior_interval(0.2) == ProbabilityInterval(0.1, 0.4)
    with pytest.raises(DomainError):
        SymmetricBound(0.5, "ratio")
    with pytest.raises(DomainError):
        SymmetricBound(0.5, "other")


def test_domain_errors():
    with pytest.raises(DomainError):
        posterior_interval(-1.0, 0.0, 0.5)
    with pytest.raises(DomainError):
        posterior_interval(1.0, 0.0, 1.5)
    with pytest.raises(DomainError):
        posterior_interval(math.inf, 0.0, 0.5)
