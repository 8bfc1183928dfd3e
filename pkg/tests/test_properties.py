import math

import pytest
from hypothesis import given, settings, strategies as st

from juttner_eos import bessel, eos

log_beta = st.floats(min_value=math.log(1e-3), max_value=math.log(1e3))
log_n = st.floats(min_value=math.log(1e-3), max_value=math.log(1e3))


@given(log_beta)
@settings(max_examples=200, deadline=None)
def test_recurrence_and_ordering(lb):
    beta = math.exp(lb)
    s0, s1, s2, d21 = bessel.scaled_integrals(beta)
    assert abs(s2 - 2.0 / beta * s1 - s0) / s2 < 1e-12
    assert 0 < s0 < s1 < s2
    assert d21 == pytest.approx(s2 - s1, rel=1e-12, abs=1e-15 * s2)


@given(log_beta)
@settings(max_examples=200, deadline=None)
def test_ratio_bounds_hold(lb):
    beta = math.exp(lb)
    r = bessel.ratio12(beta).ratio
    assert 0 < r < min(1.0, beta / 2)
    if beta >= 0.5:
        lo, hi = bessel.ratio_bounds(beta)
        assert lo <= r <= hi


@given(st.floats(min_value=1e-8, max_value=1e8))
def test_taylor_gaps_nonnegative(x):
    assert all(g >= 0 for g in bessel.taylor_slacks(x))
    lo, mid, hi = bessel.taylor_sandwich_invsqrt(x)
    assert lo <= mid <= hi or math.isclose(mid, lo) or math.isclose(mid, hi)


@given(log_n, log_beta, st.floats(min_value=1e-3, max_value=1e3))
@settings(max_examples=100, deadline=None)
def test_scaling_in_n(ln, lb, lam):
    n, beta = math.exp(ln), math.exp(lb)
    assert eos.pressure(lam * n, beta) == pytest.approx(lam * eos.pressure(n, beta), rel=1e-14)
    assert eos.energy_density(lam * n, beta) == pytest.approx(lam * eos.energy_density(n, beta), rel=1e-14)
    shift = eos.entropy_per_particle(lam * n, beta) - eos.entropy_per_particle(n, beta)
    assert shift == pytest.approx(-math.log(lam), abs=1e-12)


@given(log_n, log_beta)
@settings(max_examples=100, deadline=None)
def test_inversion_round_trip(ln, lb):
    n, beta = math.exp(ln), math.exp(lb)
    res = eos.invert_map(*eos.forward_map(n, beta))
    assert res.n == pytest.approx(n, rel=1e-10)
    assert res.beta == pytest.approx(beta, rel=1e-10)
    assert res.iterations <= eos.MAX_ITERATIONS


@given(log_beta)
@settings(max_examples=100, deadline=None)
def test_sound_speed_bounded(lb):
    beta = math.exp(lb)
    assert eos.sound_speed_inverse(beta) > 3
    assert 0 < eos.sound_speed_squared(beta) < 1 / 3
