import math

import numpy as np
import pytest

from fresnelck.abcd import (
    ABCDState,
    ABCDTrajectory,
    CoefficientFunctions,
    ck_abcd,
    ck_coefficients,
    derivative,
    fd_weights,
    reduce_b_zero,
    reduced_frequency,
    residual_check,
    static_coefficients,
    symplectic_defect,
)
from fresnelck.errors import OverdampedError, ParameterError, StabilityRangeError
from fresnelck.model import OscillatorSpec


def test_ck_closed_form(spec):
    for t in (0.0, 0.5, 1.0, 2.0, 3.0):
        s = ck_abcd(spec, t)
        e = math.exp(0.5 * t)
        assert (s.a, s.b, s.c, s.d) == (e, 0.0, 0.5 * e, math.exp(-0.5 * t))
        assert symplectic_defect(s) < 1e-12


def test_undamped_identity():
    s = ck_abcd(OscillatorSpec(gamma=0.0), 2.0)
    assert (s.a, s.b, s.c, s.d) == (1.0, 0.0, 0.0, 1.0)


def test_inverse_and_compose(spec):
    s = ck_abcd(spec, 1.3)
    ident = s.compose(s.inverse())
    np.testing.assert_allclose(ident.matrix, np.eye(2), atol=1e-15)


def test_fd_weights_exact_on_polynomials():
    nodes = np.array([-2.0, -1.0, 0.0, 1.0, 2.0]) * 0.1
    w = fd_weights(0.0, nodes, 2)
    assert np.dot(w, nodes**2) == pytest.approx(2.0, abs=1e-10)
    assert np.dot(w, nodes**3) == pytest.approx(0.0, abs=1e-10)


def test_derivative_accuracy():
    t = np.linspace(0, 2, 201)
    np.testing.assert_allclose(derivative(np.sin(t), t, 1, width=5), np.cos(t), atol=1e-7)
    np.testing.assert_allclose(derivative(np.sin(t), t, 2, width=5), -np.sin(t), atol=1e-5)


def test_reduction_recovers_ck(spec):
    times = np.arange(0, 3001) * 1e-3
    traj = reduce_b_zero(ck_coefficients(spec), spec, times)
    ref = np.exp(0.5 * times)
    assert np.max(np.abs(traj.a - ref)) < 1e-12
    assert np.max(np.abs(traj.c - 0.5 * ref)) < 1e-5
    assert np.ptp(traj.omega_sq) < 1e-6
    assert np.max(np.abs(traj.omega_sq - 0.75)) < 1e-6


def test_reduction_static_is_identity():
    spec = OscillatorSpec(gamma=0.0)
    traj = reduce_b_zero(static_coefficients(), spec, np.linspace(0, 1, 11))
    np.testing.assert_allclose(traj.a, 1.0)
    np.testing.assert_allclose(traj.c, 0.0, atol=1e-14)
    np.testing.assert_allclose(traj.omega_sq, 1.0)


def test_reduction_nonexponential_profile():
    # f = 1/(1+t)^2 gives A = 1 + t, so omega^2 = omega0^2 (f g = 1)
    spec = OscillatorSpec(gamma=0.0)
    coeffs = CoefficientFunctions(lambda t: (1 + t) ** -2.0, lambda t: (1 + t) ** 2.0)
    traj = reduce_b_zero(coeffs, spec, np.arange(0, 2001) * 1e-3)
    np.testing.assert_allclose(traj.a, 1 + traj.times, atol=1e-12)
    assert np.ptp(traj.omega_sq) < 1e-6


def test_residuals_small_on_closed_form(spec):
    times = np.arange(0, 3001) * 1e-3
    states = tuple(ck_abcd(spec, t) for t in times)
    traj = ABCDTrajectory(times, states, np.full(len(times), 0.75))
    _, *residuals = residual_check(traj, ck_coefficients(spec), spec)
    assert max(r.max() for r in residuals) < 1e-5


def test_residuals_detect_wrong_trajectory(spec):
    times = np.arange(0, 1001) * 1e-3
    wrong = tuple(ABCDState(t, math.exp(0.4 * t), 0.0, 0.4 * math.exp(0.4 * t), math.exp(-0.4 * t)) for t in times)
    traj = ABCDTrajectory(times, wrong, np.full(len(times), 0.75))
    _, *residuals = residual_check(traj, ck_coefficients(spec), spec)
    assert max(r.max() for r in residuals) > 1e-2


def test_csv_roundtrip(spec):
    times = np.linspace(0, 1, 6)
    traj = reduce_b_zero(ck_coefficients(spec), spec, times)
    back = ABCDTrajectory.from_csv(traj.to_csv())
    np.testing.assert_array_equal(back.a, traj.a)
    np.testing.assert_array_equal(back.omega_sq, traj.omega_sq)
    assert traj.to_csv().splitlines()[0] == "t,A,B,C,D,omega_sq"


def test_errors(spec):
    with pytest.raises(OverdampedError):
        reduced_frequency(_overdamped())
    with pytest.raises(StabilityRangeError):
        reduce_b_zero(ck_coefficients(spec), spec, [0.0, 0.1])
    with pytest.raises(ParameterError):
        reduce_b_zero(ck_coefficients(spec), spec, [0.0, 0.2, 0.1])
    bad = CoefficientFunctions(lambda t: -1.0 + 0 * t, lambda t: 1.0 + 0 * t)
    with pytest.raises(ParameterError):
        reduce_b_zero(bad, spec, [0.0, 0.1, 0.2])


def _overdamped():
    # bypasses validation to reach the guard inside reduced_frequency
    spec = object.__new__(OscillatorSpec)
    for name, value in dict(m=1.0, omega0=1.0, gamma=2.0, hbar=1.0).items():
        object.__setattr__(spec, name, value)
    return spec


@pytest.mark.parametrize("gamma", [0.0, 0.1, 0.5, 0.9])
def test_symplectic_over_long_times(gamma):
    spec = OscillatorSpec(gamma=gamma)
    assert max(symplectic_defect(ck_abcd(spec, t)) for t in np.linspace(0, 5, 501)) < 1e-12


@pytest.mark.parametrize("dt", [1e-2, 3e-3, 1e-3])
def test_reduced_residual_scales_with_step(spec, dt):
    times = np.arange(0, int(round(3 / dt)) + 1) * dt
    traj = reduce_b_zero(ck_coefficients(spec), spec, times)
    _, *residuals = residual_check(traj, ck_coefficients(spec), spec)
    assert max(r.max() for r in residuals) < 10 * dt**2
    assert np.max(np.abs(traj.c - 0.5 * np.exp(0.5 * times))) < dt**2
