from __future__ import annotations

import logging
from functools import partial

import numpy as np
import pytest

from conftest import linearization_defect, single_mode
from vring._spectral import grid
from vring.constants import UNIT
from vring.errors import DomainError, IntegrationError, StepSizeError
from vring.geometry import unit_tangent
from vring.integrator import integrate, step_linear, step_linearized, step_nonlinear
from vring.modes import random_spectrum
from vring.spectral import base_tangent, tangent_field
from vring.state import PerturbationState


def test_linear_matches_closed_form():
    state = PerturbationState(UNIT, single_mode(2))
    initial = tangent_field(state, 0.0, 64).complex_field
    traj = integrate(initial, 1.0, 1e-3, "linear", stride=1000)
    assert traj.times[-1] == pytest.approx(1.0)
    exact = tangent_field(state, 1.0, 64).complex_field
    assert np.max(np.abs(traj.fields[-1] - exact)) <= 1e-8


def test_zero_field_stays_zero():
    assert np.all(step_linear(np.zeros(32, dtype=complex), 1e-3) == 0)


def test_real_constant_is_stationary():
    f = np.full(32, 0.7 + 0j)
    np.testing.assert_allclose(step_linear(f, 1e-2), f, atol=1e-15)


def test_base_tangent_is_nonlinear_fixed_point():
    j0 = base_tangent(grid(64))
    traj = integrate(j0, 0.5, 1e-3, "nonlinear", stride=100)
    assert len(traj.times) == 6
    for f in traj.fields:
        assert np.max(np.abs(f - j0)) <= 1e-10


def test_linearization_order():
    state = PerturbationState(UNIT, random_spectrum(np.random.default_rng(7), 3), epsilon=1.0)
    big = linearization_defect(state, 1e-3)
    small = linearization_defect(state, 5e-4)
    assert 3.0 <= big / small <= 5.0


def test_azimuthal_component_frozen():
    state = PerturbationState(UNIT, random_spectrum(np.random.default_rng(2), 4))
    n = 64
    delta = tangent_field(state, 0.0, n).cartesian()
    j0 = base_tangent(grid(n))
    traj = integrate(delta, 1.0, 1e-3, "linearized", stride=50)
    drift = [abs(2 * np.pi * np.mean(np.abs(np.sum(f * j0, axis=1)))) for f in traj.fields]
    assert max(drift) <= 1e-8


def test_linearized_agrees_with_complex_form():
    state = PerturbationState(UNIT, random_spectrum(np.random.default_rng(5), 4))
    n = 64
    traj = integrate(tangent_field(state, 0.0, n).cartesian(), 1.0, 1e-3, "linearized", stride=1000)
    assert np.max(np.abs(traj.fields[-1] - tangent_field(state, 1.0, n).cartesian())) <= 1e-8


def test_tau_end_zero():
    f = np.ones(16, dtype=complex)
    traj = integrate(f, 0.0, 1e-3)
    assert traj.times.tolist() == [0.0]
    np.testing.assert_array_equal(traj.fields[0], f)


def test_fourth_order_convergence():
    state = PerturbationState(UNIT, single_mode(4))
    n = 32
    stepper = partial(step_linear, k_max=5)
    exact = tangent_field(state, 1.0, n).complex_field
    init = tangent_field(state, 0.0, n).complex_field
    errs = [
        np.max(np.abs(integrate(init, 1.0, dt, stepper, stride=10**6).fields[-1] - exact))
        for dt in (0.02, 0.01)
    ]
    assert 16 * 0.7 <= errs[0] / errs[1] <= 16 * 1.3


def test_nonlinear_norm_conservation():
    state = PerturbationState(UNIT, random_spectrum(np.random.default_rng(11), 4), epsilon=1e-2)
    traj = integrate(unit_tangent(state, 0.0, 64), 1.0, 1e-3, "nonlinear", stride=100)
    for f in traj.fields:
        assert np.max(np.abs(np.linalg.norm(f, axis=1) - 1)) <= 1e-7


def test_nonlinear_rejects_non_unit_field():
    j = base_tangent(grid(32))
    j[0] *= 1.1
    with pytest.raises(IntegrationError):
        step_nonlinear(j, 1e-3)


def test_renormalization_is_logged(caplog):
    n = 32
    xi = grid(n)
    # unit field whose RK4 step drifts the norm by ~7e-10 at this step size
    j = np.column_stack([np.cos(3 * xi), np.sin(3 * xi) * np.cos(xi), np.sin(3 * xi) * np.sin(xi)])
    with caplog.at_level(logging.INFO, logger="vring.integrator"):
        out = step_nonlinear(j, 3e-3)
    assert "renormalizing" in caplog.text
    np.testing.assert_allclose(np.linalg.norm(out, axis=1), 1.0, atol=1e-14)


def test_excessive_norm_drift_is_an_error():
    xi = grid(32)
    j = np.column_stack([np.cos(3 * xi), np.sin(3 * xi) * np.cos(xi), np.sin(3 * xi) * np.sin(xi)])
    with pytest.raises(IntegrationError):
        step_nonlinear(j, 3e-2)


def test_unstable_step_detected():
    f = np.exp(1j * 10 * grid(32))
    with pytest.raises(StepSizeError):
        integrate(f, 1.0, 0.05, partial(step_linear, k_max=15))


@pytest.mark.parametrize("kwargs", [{"tau_end": -1.0, "dt": 0.1}, {"tau_end": 1.0, "dt": 0.0}, {"tau_end": 1.0, "dt": 0.3}])
def test_integrate_argument_checks(kwargs):
    with pytest.raises(DomainError):
        integrate(np.zeros(8, dtype=complex), **kwargs)


def test_linearized_zero_field():
    assert np.all(step_linearized(np.zeros((16, 3)), 1e-3) == 0)
