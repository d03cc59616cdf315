import dataclasses
import math

import numpy as np
import pytest

from pwclock import (
    ClockParams,
    DimensionTooSmall,
    InvalidAbstractTime,
    NegativeDamping,
    NonPositiveAmplitude,
    NonPositiveScale,
    NotHermitian,
    NotNormalized,
    OverDamped,
    ResetTooLate,
    SystemSpec,
    ZeroDamping,
    check_abstract_time,
    validate_clock_params,
    validate_system_spec,
)


def pauli_z_spec():
    return SystemSpec(
        dim=2,
        hamiltonian=np.diag([0.5, -0.5]).astype(complex),
        initial_state=np.array([1.0, 0.0], dtype=complex),
    )


def test_valid_clock_params_pass_through():
    params = ClockParams(mass=1.0, omega=1.0, damping=0.5, n_reset=2.0, alpha=1.0)
    assert validate_clock_params(params) is params


def test_over_damped_rejected():
    with pytest.raises(OverDamped):
        validate_clock_params(ClockParams(damping=2.5, n_reset=0.1))


def test_reset_too_late_rejected():
    with pytest.raises(ResetTooLate):
        validate_clock_params(ClockParams(damping=0.1, n_reset=20.0))


def test_reset_at_limit_accepted():
    validate_clock_params(ClockParams(damping=0.1, n_reset=10.0))


@pytest.mark.parametrize("alpha", [0.0, -1.0, 1j])
def test_non_positive_amplitude_rejected(alpha):
    with pytest.raises(NonPositiveAmplitude):
        validate_clock_params(ClockParams(alpha=alpha, n_reset=1.0))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"mass": 0.0},
        {"omega": -1.0},
        {"hbar": 0.0},
        {"n_reset": 0.0},
        {"n_reset": -2.0},
        {"n_reset": math.inf},
    ],
)
def test_non_positive_scales_rejected(kwargs):
    with pytest.raises(NonPositiveScale):
        validate_clock_params(ClockParams(**kwargs))


def test_negative_damping_rejected():
    with pytest.raises(NegativeDamping):
        validate_clock_params(ClockParams(damping=-0.1))


def test_undamped_clock_allowed():
    params = validate_clock_params(ClockParams(damping=0.0, n_reset=5.0))
    assert params.damped_frequency == params.omega


def test_validation_idempotent():
    params = ClockParams(damping=0.3, n_reset=3.0)
    assert validate_clock_params(validate_clock_params(params)) is params


def test_derived_accessors_are_pure():
    params = ClockParams(hbar=1.7, mass=0.6, omega=1.9, damping=0.8, alpha=1.2 + 0.4j, n_reset=1.0)
    assert params.damped_frequency == params.damped_frequency
    assert params.damped_frequency == pytest.approx(
        math.sqrt(params.omega**2 - params.damping**2 / 4.0), abs=0.0
    )
    expected_amp = math.sqrt(2.0 * params.hbar / (params.mass * params.omega)) * 1.2
    assert params.amplitude == pytest.approx(expected_amp, rel=1e-15)


def test_with_amplitude_hits_target():
    params = ClockParams(mass=123.0, omega=0.7, alpha=1.0 - 0.5j, n_reset=1.0)
    scaled = params.with_amplitude(2.5)
    assert scaled.amplitude == pytest.approx(2.5, rel=1e-14)
    assert scaled.alpha.imag == -0.5


def test_clock_params_frozen():
    params = ClockParams()
    with pytest.raises(dataclasses.FrozenInstanceError):
        params.omega = 2.0


def test_valid_system_spec_pass_through():
    spec = pauli_z_spec()
    assert validate_system_spec(spec) is spec


def test_not_hermitian_rejected():
    h = np.array([[0.5, 0.1], [0.3, -0.5]], dtype=complex)
    spec = SystemSpec(dim=2, hamiltonian=h, initial_state=np.array([1.0, 0.0]))
    with pytest.raises(NotHermitian):
        validate_system_spec(spec)


def test_not_normalized_rejected():
    spec = SystemSpec(
        dim=2,
        hamiltonian=np.diag([0.5, -0.5]).astype(complex),
        initial_state=np.array([1.0, 1.0]),
    )
    with pytest.raises(NotNormalized):
        validate_system_spec(spec)


def test_dimension_too_small_rejected():
    spec = SystemSpec(dim=1, hamiltonian=np.array([[1.0]]), initial_state=np.array([1.0]))
    with pytest.raises(DimensionTooSmall):
        validate_system_spec(spec)


def test_system_arrays_read_only():
    spec = pauli_z_spec()
    with pytest.raises(ValueError):
        spec.hamiltonian[0, 0] = 9.0
    with pytest.raises(ValueError):
        spec.initial_state[0] = 0.0


def test_rescaled_hamiltonian():
    spec = pauli_z_spec()
    params = ClockParams(damping=0.5, n_reset=2.0, alpha=1.0)
    scaled = spec.rescaled_hamiltonian(params)
    expected = 2.0 * spec.hamiltonian / (0.5 * params.amplitude)
    np.testing.assert_allclose(scaled, expected, rtol=0, atol=0)
    with pytest.raises(ZeroDamping):
        spec.rescaled_hamiltonian(ClockParams(damping=0.0, n_reset=1.0))


def test_check_abstract_time_window():
    params = ClockParams(damping=0.5, n_reset=2.0)
    assert check_abstract_time(0.0, params) == 0.0
    assert check_abstract_time(2.0, params) == 2.0
    with pytest.raises(InvalidAbstractTime):
        check_abstract_time(-0.1, params)
    with pytest.raises(InvalidAbstractTime):
        check_abstract_time(2.1, params)
