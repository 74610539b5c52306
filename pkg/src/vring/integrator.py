"""Fixed-step pseudo-spectral RK4 integrators used as an independent oracle.

Three right-hand sides are provided:

* the linearized complex equation ``dj/dtau = -i j'' - (i/2)(j - conj j)``,
* the same linearization in 3D Cartesian form ``d delta/dtau = j0 x (delta + delta'')``,
* the continuous Heisenberg spin chain ``dj/dtau = j x j''``.

Spatial derivatives are spectral. Wavenumbers above ``k_max`` (default
``N // 3``) are excluded from the derivative so that classical RK4 stays
inside its stability region at ``dtau = 1e-3`` on the default grids.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from . import _spectral
from .errors import DomainError, IntegrationError, StepSizeError
from .spectral import base_tangent

__all__ = [
    "FieldTrajectory",
    "step_linear",
    "step_linearized",
    "step_nonlinear",
    "integrate",
    "NORM_RENORMALIZE_TOL",
    "NORM_FAIL_TOL",
]

log = logging.getLogger(__name__)

BLOWUP_FACTOR = 10.0
NORM_RENORMALIZE_TOL = 1e-10
NORM_FAIL_TOL = 1e-6

Stepper = Callable[[NDArray, float], NDArray]


def _default_kmax(n: int, k_max: int | None) -> int:
    return n // 3 if k_max is None else k_max


def _rk4(f: NDArray, dt: float, rhs: Callable[[NDArray], NDArray]) -> NDArray:
    k1 = rhs(f)
    k2 = rhs(f + 0.5 * dt * k1)
    k3 = rhs(f + 0.5 * dt * k2)
    k4 = rhs(f + dt * k3)
    return f + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _check_blowup(old: NDArray, new: NDArray) -> None:
    a = float(np.max(np.abs(old), initial=0.0))
    b = float(np.max(np.abs(new), initial=0.0))
    if not np.isfinite(b) or (a > 0 and b > BLOWUP_FACTOR * a) or (a == 0 and b > 0):
        raise StepSizeError(f"field grew from {a:.3e} to {b:.3e} in one step; reduce dtau")


def step_linear(field: NDArray[np.complex128], dt: float, k_max: int | None = None) -> NDArray[np.complex128]:
    """One RK4 step of the linearized complex equation.

    The step is carried out on Fourier coefficients: with ``F = fft(j)``
    the conjugate field has coefficients ``conj(F[-k])``.
    """
    if dt <= 0:
        raise DomainError("dtau must be positive")
    f = np.asarray(field, dtype=np.complex128)
    n = f.size
    k = _spectral.wavenumbers(n)
    mask = _spectral.band_mask(n, _default_kmax(n, k_max))
    neg = (-k) % n
    ik2 = 1j * (k.astype(float) ** 2)

    def rhs(F: NDArray) -> NDArray:
        return mask * (ik2 * F - 0.5j * (F - np.conj(F[neg])))

    out = np.fft.ifft(_rk4(np.fft.fft(f), dt, rhs))
    _check_blowup(f, out)
    return out


def step_linearized(delta: NDArray[np.float64], dt: float, k_max: int | None = None) -> NDArray[np.float64]:
    """One RK4 step of ``d delta/dtau = j0 x (delta + delta'')`` in Cartesian components."""
    if dt <= 0:
        raise DomainError("dtau must be positive")
    d = np.asarray(delta, dtype=np.float64)
    n = d.shape[0]
    j0 = base_tangent(_spectral.grid(n))
    km = _default_kmax(n, k_max)

    def rhs(x: NDArray) -> NDArray:
        return np.cross(j0, x + _spectral.derivative(x, 2, km))

    out = _rk4(d, dt, rhs)
    _check_blowup(d, out)
    return out


def step_nonlinear(j: NDArray[np.float64], dt: float, k_max: int | None = None) -> NDArray[np.float64]:
    """One RK4 step of the spin-chain equation ``dj/dtau = j x j''``.

    The exact flow preserves ``|j|`` pointwise. A drift above
    ``NORM_RENORMALIZE_TOL`` is removed by rescaling to the pre-step
    norms (and logged); a drift above ``NORM_FAIL_TOL`` is an error.
    """
    if dt <= 0:
        raise DomainError("dtau must be positive")
    j = np.asarray(j, dtype=np.float64)
    norms = np.linalg.norm(j, axis=1)
    if np.ptp(norms) > NORM_FAIL_TOL:
        raise IntegrationError(
            f"tangent norms vary by {np.ptp(norms):.3e}; the stepper needs a near-unit field"
        )
    km = _default_kmax(j.shape[0], k_max)

    def rhs(x: NDArray) -> NDArray:
        return np.cross(x, _spectral.derivative(x, 2, km))

    out = _rk4(j, dt, rhs)
    _check_blowup(j, out)
    new_norms = np.linalg.norm(out, axis=1)
    drift = float(np.max(np.abs(new_norms - norms)))
    if drift > NORM_FAIL_TOL:
        raise IntegrationError(f"norm drift {drift:.3e} in one step exceeds {NORM_FAIL_TOL:g}")
    if drift > NORM_RENORMALIZE_TOL:
        log.info("renormalizing tangent field: pointwise norm drift %.3e", drift)
        out = out * (norms / new_norms)[:, None]
    return out


_STEPPERS: dict[str, Stepper] = {
    "linear": step_linear,
    "linearized": step_linearized,
    "nonlinear": step_nonlinear,
}


@dataclass(frozen=True)
class FieldTrajectory:
    """Snapshots of a field at uniformly spaced times.

    ``fields[i]`` is the field at ``times[i]``: complex ``(N,)`` samples
    for the linear stepper, ``(N, 3)`` samples otherwise.
    """

    times: NDArray[np.float64]
    fields: NDArray
    dt: float
    n_grid: int


def integrate(
    initial: NDArray,
    tau_end: float,
    dt: float,
    stepper: str | Stepper = "linear",
    stride: int = 1,
) -> FieldTrajectory:
    """March ``initial`` to ``tau_end`` with fixed steps, keeping every ``stride``-th state.

    The initial and final fields are always stored.
    """
    if tau_end < 0:
        raise DomainError("tau_end must be non-negative")
    if dt <= 0:
        raise DomainError("dtau must be positive")
    if stride < 1:
        raise DomainError("stride must be at least 1")
    step = _STEPPERS[stepper] if isinstance(stepper, str) else stepper
    n_steps = int(round(tau_end / dt))
    if abs(n_steps * dt - tau_end) > 1e-9 * max(1.0, tau_end):
        raise DomainError(f"dtau={dt:g} does not divide tau_end={tau_end:g}")
    field = np.array(initial, copy=True)
    times = [0.0]
    fields = [field]
    for i in range(1, n_steps + 1):
        field = step(field, dt)
        if i % stride == 0 or i == n_steps:
            times.append(i * dt)
            fields.append(field)
    return FieldTrajectory(np.array(times), np.array(fields), dt, field.shape[0])
