"""Concentration bound evaluation and its empirical verification."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vmac.bounds import (
    BoundResult,
    HoeffdingQuery,
    empirical_exceedance,
    hoeffding_delta,
)
from vmac.errors import DegenerateRanges, InsufficientHistory
from vmac.rate_engine import MeasurementWindow
from vmac.trace_model import (
    MBPS,
    FlowInstance,
    FlowRateBounds,
    synth_bounded_trace,
)

from .conftest import make_trace


def uniform_query(n, epsilon_mbps, width_mbps):
    ranges = tuple(FlowRateBounds(0.0, width_mbps * MBPS) for _ in range(n))
    return HoeffdingQuery(n=n, epsilon=epsilon_mbps * MBPS, ranges=ranges)


# -- closed-form evaluations ---------------------------------------------------

def test_delta_closed_form_exp_minus_one():
    # n=2, eps=1, two ranges of width 2: exp(-2*4*1/8) = exp(-1)
    result = hoeffding_delta(uniform_query(2, 1.0, 2.0))
    assert result.delta == pytest.approx(math.exp(-1), abs=1e-12)
    assert result.exponent == pytest.approx(-1.0, abs=1e-12)


def test_delta_closed_form_half_width():
    # n=1, eps = w/2: exp(-2 * (w/2)^2 / w^2) = exp(-0.5)
    result = hoeffding_delta(uniform_query(1, 1.0, 2.0))
    assert result.delta == pytest.approx(math.exp(-0.5), abs=1e-12)


def test_delta_tends_to_one_for_tiny_epsilon():
    result = hoeffding_delta(uniform_query(3, 1e-12, 2.0))
    assert result.delta == pytest.approx(1.0)


def test_degenerate_ranges_rejected():
    ranges = (FlowRateBounds(1.0, 1.0), FlowRateBounds(2.0, 2.0))
    with pytest.raises(DegenerateRanges):
        hoeffding_delta(HoeffdingQuery(n=2, epsilon=1.0, ranges=ranges))


def test_query_validation():
    with pytest.raises(ValueError):
        HoeffdingQuery(n=2, epsilon=1.0, ranges=(FlowRateBounds(0.0, 1.0),))
    with pytest.raises(ValueError):
        HoeffdingQuery(n=1, epsilon=0.0, ranges=(FlowRateBounds(0.0, 1.0),))


def test_underflow_keeps_delta_positive():
    result = hoeffding_delta(uniform_query(1000, 100.0, 0.001))
    assert result.underflow
    assert 0.0 < result.delta <= 1.0


# -- monotonicity properties ---------------------------------------------------

@given(
    n=st.integers(1, 50),
    eps=st.floats(0.01, 10.0),
    width=st.floats(0.1, 20.0),
)
def test_delta_in_unit_interval(n, eps, width):
    result = hoeffding_delta(uniform_query(n, eps, width))
    assert 0.0 < result.delta <= 1.0
    assert result.exponent <= 0.0


@given(n=st.integers(1, 30), width=st.floats(0.1, 10.0))
def test_delta_decreasing_in_epsilon(n, width):
    deltas = [
        hoeffding_delta(uniform_query(n, eps, width)).delta
        for eps in (0.1, 0.5, 1.0, 2.0)
    ]
    assert all(a >= b for a, b in zip(deltas, deltas[1:]))


@given(eps=st.floats(0.05, 2.0), width=st.floats(0.5, 10.0))
def test_delta_decreasing_in_flow_count(eps, width):
    deltas = [
        hoeffding_delta(uniform_query(n, eps, width)).delta
        for n in (1, 2, 5, 10)
    ]
    assert all(a >= b for a, b in zip(deltas, deltas[1:]))


@given(n=st.integers(1, 30), eps=st.floats(0.05, 2.0))
def test_delta_increasing_in_range_width(n, eps):
    deltas = [
        hoeffding_delta(uniform_query(n, eps, w)).delta
        for w in (0.5, 1.0, 2.0, 5.0)
    ]
    assert all(a <= b for a, b in zip(deltas, deltas[1:]))


# -- empirical exceedance -------------------------------------------------------

def bounded_flows(n, width_mbps, seed, length=500):
    bounds = FlowRateBounds(0.0, width_mbps * MBPS)
    return [
        FlowInstance(
            trace=synth_bounded_trace(
                length, bounds, fps=30.0, seed=seed * 1000 + i,
                trace_id=f"u{i}",
            ),
            start_offset=0,
            flow_id=i,
        )
        for i in range(n)
    ]


def test_cbr_exceedance_zero_for_positive_epsilon():
    trace = make_trace([1000] * 50)
    flows = [FlowInstance(trace=trace, start_offset=0)]
    window = MeasurementWindow(4, 5)
    assert empirical_exceedance(flows, window, epsilon=1.0, samples=200, seed=0) == 0.0


def test_cbr_exceedance_one_for_zero_epsilon():
    # with epsilon 0 the comparison is inst >= avg, and CBR ties everywhere
    trace = make_trace([1000] * 50)
    flows = [FlowInstance(trace=trace, start_offset=0)]
    window = MeasurementWindow(4, 5)
    assert empirical_exceedance(flows, window, epsilon=0.0, samples=200, seed=0) == 1.0


def test_exceedance_deterministic_per_seed():
    flows = bounded_flows(5, 2.0, seed=3)
    window = MeasurementWindow(4, 5)
    a = empirical_exceedance(flows, window, 0.1 * MBPS, 1000, seed=11)
    b = empirical_exceedance(flows, window, 0.1 * MBPS, 1000, seed=11)
    assert a == b


def test_exceedance_below_bound_spot_check():
    # n=10 uniform flows of width 2 Mbps, eps 0.5 Mbps: the measured
    # exceedance must respect the closed-form bound
    flows = bounded_flows(10, 2.0, seed=1)
    window = MeasurementWindow(4, 5)
    measured = empirical_exceedance(flows, window, 0.5 * MBPS, 10_000, seed=2)
    bound = hoeffding_delta(uniform_query(10, 0.5, 2.0)).delta
    assert measured <= bound


def test_exceedance_requires_history():
    trace = make_trace([1000, 2000])
    flows = [FlowInstance(trace=trace, start_offset=0)]
    with pytest.raises(InsufficientHistory):
        empirical_exceedance(flows, MeasurementWindow(4, 5), 1.0, 10, seed=0)


@settings(max_examples=20, deadline=None)
@given(
    n=st.integers(2, 8),
    seed=st.integers(0, 10_000),
    eps=st.sampled_from([0.2, 0.5, 1.0]),
)
def test_exceedance_never_beats_bound(n, seed, eps):
    flows = bounded_flows(n, 2.0, seed=seed, length=300)
    window = MeasurementWindow(4, 5)
    measured = empirical_exceedance(flows, window, eps * MBPS, 2000, seed=seed)
    bound = hoeffding_delta(uniform_query(n, eps, 2.0)).delta
    assert measured <= bound
