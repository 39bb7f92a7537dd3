import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fetalsep.errors import DivergedError, ShapeError
from fetalsep.lms import FilterState, lms_step, run_canceller
from fetalsep.schedule import LrSchedule
from fetalsep.signal import Signal


def test_step_arithmetic():
    out = lms_step(FilterState([0.5]), [2.0], 3.0, 0.1)
    assert out.prediction == 1.0
    assert out.child == 2.0
    assert out.state.weights[0] == pytest.approx(1.3, abs=1e-15)
    assert out.state.iteration == 1 and not out.state.diverged


def test_zero_window_is_a_fixed_point():
    w = np.array([0.3, -1.2, 4.0])
    out = lms_step(FilterState(w), np.zeros(3), 7.5, 0.9)
    assert out.prediction == 0.0 and out.child == 7.5
    np.testing.assert_array_equal(out.state.weights, w)


def test_zero_error_is_a_fixed_point():
    w = np.array([0.25, -0.5])
    window = np.array([2.0, 4.0])
    out = lms_step(FilterState(w), window, float(window @ w), 3.0)
    assert out.child == 0.0
    np.testing.assert_array_equal(out.state.weights, w)


def test_window_is_newest_first():
    # W[0] weights x(t): with W = [1, 0] the prediction is the newest sample
    x = np.array([1.0, 2.0, 3.0, 4.0])
    res = run_canceller(x, np.zeros(4), 2, 0.0, initial_weights=[1.0, 0.0])
    np.testing.assert_array_equal(res.prediction.samples, [0.0, 2.0, 3.0, 4.0])


def test_shape_errors():
    with pytest.raises(ShapeError):
        lms_step(FilterState([0.0, 0.0]), [1.0], 0.0, 0.1)
    with pytest.raises(ShapeError):
        run_canceller(np.ones(5), np.ones(4), 1, 0.1)
    with pytest.raises(ShapeError):
        run_canceller(np.ones(3), np.ones(3), 4, 0.1)


def test_diverged_state_refuses_steps():
    out = lms_step(FilterState([1.0]), [1e200], 0.0, 1e200)
    assert out.state.diverged
    np.testing.assert_array_equal(out.state.weights, [1.0])
    with pytest.raises(DivergedError):
        lms_step(out.state, [1.0], 0.0, 0.1)


@given(st.lists(st.floats(-10, 10), min_size=3, max_size=3),
       st.lists(st.floats(-10, 10), min_size=3, max_size=3),
       st.lists(st.floats(-10, 10), min_size=3, max_size=3),
       st.floats(-5, 5), st.floats(-5, 5))
@settings(max_examples=200, deadline=None)
def test_prediction_is_linear_in_window(w, u, v, a, b):
    state = FilterState(w)
    u, v = np.array(u), np.array(v)
    p_u = lms_step(state, u, 0.0, 0.0).prediction
    p_v = lms_step(state, v, 0.0, 0.0).prediction
    p_uv = lms_step(state, a * u + b * v, 0.0, 0.0).prediction
    scale = max(1.0, abs(a * p_u), abs(b * p_v))
    assert abs(p_uv - (a * p_u + b * p_v)) <= 1e-12 * scale


@pytest.mark.parametrize("L", [1, 3])
def test_run_matches_stepwise(L):
    rng = np.random.default_rng(1)
    x = rng.standard_normal(400)
    d = np.convolve(x, [0.7, -0.2, 0.1])[:400] + 0.1 * rng.standard_normal(400)
    res = run_canceller(x, d, L, 0.01)
    state = FilterState.zeros(L)
    child = d.copy()
    for t in range(L - 1, 400):
        out = lms_step(state, x[t - L + 1:t + 1][::-1], d[t], 0.01)
        child[t] = out.child
        state = out.state
    np.testing.assert_array_equal(res.child.samples, child)
    np.testing.assert_array_equal(res.weights, state.weights)
    assert len(res.lr_trace) == 400 - L + 1


def test_warm_up_passes_primary():
    rng = np.random.default_rng(2)
    x, d = rng.standard_normal(50), rng.standard_normal(50)
    res = run_canceller(x, d, 5, 0.01)
    np.testing.assert_array_equal(res.child.samples[:4], d[:4])
    assert len(res.child) == 50


def test_identical_reference_converges_to_unit_weight():
    t = np.arange(20_000) / 500
    s = np.sin(2 * np.pi * 1.3 * t)
    res = run_canceller(s, s, 1, 0.01)
    # scalar Wiener solution E[ref*primary]/E[ref^2] for identical inputs
    w_star = np.mean(s * s) / np.mean(s * s)
    assert res.weights[0] == pytest.approx(w_star, abs=1e-6)
    assert np.max(np.abs(res.child.samples[10_000:])) < 1e-3


def test_zero_reference_passes_primary():
    d = np.random.default_rng(3).standard_normal(300)
    res = run_canceller(np.zeros(300), d, 3, 600.0)
    np.testing.assert_array_equal(res.child.samples, d)
    np.testing.assert_array_equal(res.weights, np.zeros(3))


def test_huge_rate_diverges_gracefully():
    rng = np.random.default_rng(4)
    x = rng.standard_normal(5000)
    d = 0.5 * x + rng.standard_normal(5000)
    res = run_canceller(x, d, 2, 1e6)
    assert res.diverged
    k = res.diverged_at
    assert k is not None
    assert np.isfinite(res.child.samples).all()
    assert np.isfinite(res.weights).all()
    # after divergence the raw primary is emitted
    np.testing.assert_array_equal(res.child.samples[k:], d[k:])


def test_divergence_is_sticky():
    state = FilterState([1.0])
    out = lms_step(state, [1e300], 0.0, 1e300)
    assert out.state.diverged
    frozen = out.state.weights.copy()
    for _ in range(3):
        with pytest.raises(DivergedError):
            lms_step(out.state, [1.0], 1.0, 0.1)
        assert out.state.diverged
        np.testing.assert_array_equal(out.state.weights, frozen)


def test_schedule_rates_are_used():
    rng = np.random.default_rng(5)
    x = rng.standard_normal(2000)
    res = run_canceller(Signal(x), Signal(x), 2, LrSchedule(10, 1e-3, 500))
    assert len(res.lr_trace) == 1999
    assert res.lr_trace[0] > 0
    # late rate is 3M times the early one for the same trace
    assert res.lr_trace[600] < res.lr_trace[400]
