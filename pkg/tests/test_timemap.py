import math

import numpy as np
import pytest

from pwclock import (
    ClockParams,
    NonMonotonicWindow,
    OutOfRange,
    ZeroDamping,
    invert_position,
    linearization_report,
    n_from_x_exact,
    n_from_x_linear,
    n_from_x_log,
    position_expectation,
    validate_clock_params,
)

from calibration import LINEAR_REL_ERR_AT_RN_0_1, LINEAR_REL_ERR_PER_RN
from oracles import loglog_slope, random_invertible_params


def narrow_window_clock():
    return validate_clock_params(
        ClockParams(omega=1.0, damping=0.1, n_reset=1.5, alpha=1.0).with_amplitude(1.0)
    )


def test_reading_at_amplitude_maps_to_zero():
    params = narrow_window_clock()
    assert n_from_x_exact(params.amplitude, params) == 0.0
    assert n_from_x_log(params.amplitude, params) == 0.0
    assert n_from_x_linear(params.amplitude, params) == 0.0


def test_round_trip_named_example():
    params = narrow_window_clock()
    assert params.damped_frequency == pytest.approx(0.99875, abs=1e-5)
    x = position_expectation(0.5, params)
    assert n_from_x_exact(x, params) == pytest.approx(0.5, abs=1e-12)


def test_round_trip_randomized():
    rng = np.random.default_rng(23)
    for _ in range(100):
        params = random_invertible_params(rng)
        n_true = rng.uniform(0.0, params.n_reset * 0.999)
        x = position_expectation(n_true, params)
        n_found = n_from_x_exact(x, params)
        assert abs(position_expectation(n_found, params) - x) <= 1e-10


def test_later_readings_sit_lower():
    params = narrow_window_clock()
    x1 = position_expectation(0.3, params)
    x2 = position_expectation(0.9, params)
    assert x1 > x2
    assert n_from_x_exact(x1, params) < n_from_x_exact(x2, params)


def test_out_of_range_readings():
    params = narrow_window_clock()
    with pytest.raises(OutOfRange):
        n_from_x_exact(params.amplitude * 1.001, params)
    floor = position_expectation(params.n_reset, params)
    with pytest.raises(OutOfRange):
        n_from_x_exact(floor, params)
    with pytest.raises(OutOfRange):
        n_from_x_exact(floor - 0.01, params)


def test_non_monotonic_window_guard():
    params = validate_clock_params(ClockParams(damping=0.1, n_reset=10.0, alpha=1.0))
    assert params.damped_frequency * params.n_reset >= math.pi / 2.0
    with pytest.raises(NonMonotonicWindow):
        n_from_x_exact(0.5, params)


def test_linear_inversion_substitution():
    params = narrow_window_clock()
    assert n_from_x_linear(0.99, params) == pytest.approx(0.2, rel=1e-12)


def test_zero_damping_linear_forms():
    params = validate_clock_params(ClockParams(damping=0.0, n_reset=1.0, alpha=1.0))
    with pytest.raises(ZeroDamping):
        n_from_x_linear(0.5, params)
    with pytest.raises(ZeroDamping):
        n_from_x_log(0.5, params)
    with pytest.raises(ZeroDamping):
        linearization_report(params, 16)
    # The exact route stays available for undamped clocks.
    x = position_expectation(0.4, params)
    assert n_from_x_exact(x, params) == pytest.approx(0.4, abs=1e-12)


def test_linear_error_scaling_law():
    params = validate_clock_params(ClockParams(omega=1.0, damping=0.5, n_reset=1.5, alpha=1.0))
    rn_values = np.logspace(-3, -1, 9)
    rel_errors = []
    for rn in rn_values:
        result = invert_position(position_expectation(rn / params.damping, params), params)
        rel_errors.append(result.rel_error_linear)
        assert result.rel_error_linear <= LINEAR_REL_ERR_PER_RN * rn
    assert 0.8 <= loglog_slope(rn_values, rel_errors) <= 1.2


def test_log_form_keeps_larger_error_than_linear_form():
    # Observed ordering on the calibration sweep: the log form overshoots
    # more than the linear form (their truncations partially cancel).
    params = validate_clock_params(ClockParams(omega=1.0, damping=0.5, n_reset=1.5, alpha=1.0))
    for rn in (1e-3, 1e-2, 0.05, 0.1, 0.3, 0.5):
        result = invert_position(position_expectation(rn / params.damping, params), params)
        log_err = abs(result.n_log - result.n_exact)
        lin_err = abs(result.n_linear - result.n_exact)
        assert log_err >= lin_err - 1e-12


def test_report_structure_and_error_growth():
    params = validate_clock_params(
        ClockParams(omega=1.0, damping=2.0 / 3.0, n_reset=1.5, alpha=1.0)
    )
    rows = linearization_report(params, 64)
    assert len(rows) == 64
    first = rows[0]
    assert (first.n_exact, first.n_log, first.n_linear, first.rel_error_linear) == (0, 0, 0, 0)
    errors = np.array([row.rel_error_linear for row in rows])
    # The relative error grows along the run; at this damping it turns over
    # by ~1e-4 inside the last two percent of the window, so allow that much.
    cutoff = int(len(errors) * 0.95)
    assert np.all(np.diff(errors[:cutoff]) > 0.0)
    assert np.all(np.diff(errors) >= -2e-4)
    within = [row for row in rows if row.n_exact * params.damping <= 0.1]
    assert within[-1].rel_error_linear <= LINEAR_REL_ERR_AT_RN_0_1


def test_report_rejects_tiny_grid():
    params = narrow_window_clock()
    with pytest.raises(ValueError):
        linearization_report(params, 1)


def test_result_fields():
    params = narrow_window_clock()
    x = position_expectation(0.7, params)
    result = invert_position(x, params)
    assert result.x == x
    assert result.y == params.amplitude - x
    assert result.y >= 0.0
    assert 0.0 <= result.n_exact < params.n_reset
    expected_rel = abs(result.n_linear - result.n_exact) / max(result.n_exact, 1e-12)
    assert result.rel_error_linear == expected_rel
