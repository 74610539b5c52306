from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from vring.constants import UNIT
from vring.modes import ModeSpectrum, random_spectrum
from vring.observables import on_shell_state

settings.register_profile(
    "vring", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("vring")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def on_shell(rng):
    """Planar on-shell state with four coupled mode pairs."""
    return on_shell_state(random_spectrum(rng, 4), UNIT, epsilon=1e-2)


def single_mode(n: int, value: complex = 1.0, n_max: int | None = None) -> ModeSpectrum:
    """Coupled spectrum with only ``j_{-n}`` (and its partner) excited."""
    n_max = n_max or max(n, 1)
    neg = np.zeros(n_max, dtype=np.complex128)
    neg[n - 1] = value
    return ModeSpectrum.from_independent(0.0, neg)


def linearization_defect(state, eps: float, tau_end: float = 1.0, dt: float = 1e-3, n_grid: int = 64) -> float:
    """Sup-norm gap between the nonlinear flow of ``j0 + eps d`` and ``j0 + eps * linear(d)``."""
    from vring.geometry import full_tangent, unit_tangent
    from vring.integrator import integrate

    st = state.replace(epsilon=eps)
    traj = integrate(unit_tangent(st, 0.0, n_grid), tau_end, dt, "nonlinear", stride=max(1, round(0.1 / dt)))
    return max(
        float(np.max(np.abs(f - full_tangent(st, t, n_grid)))) for t, f in zip(traj.times, traj.fields)
    )


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
