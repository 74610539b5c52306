"""Closure constraints and reconstruction of the filament curve."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from . import _spectral
from .constants import UNIT
from .modes import ModeSpectrum
from .output import csv_text
from .spectral import base_tangent, tangent_field
from .state import PerturbationState

__all__ = [
    "ClosureReport",
    "check_closure",
    "FilamentCurve",
    "full_tangent",
    "unit_tangent",
    "curve_from_tangent",
    "reconstruct_curve",
    "CLOSURE_RTOL",
]

log = logging.getLogger(__name__)

CLOSURE_RTOL = 1e-10
CURVE_HEADER = ("xi", "rx", "ry", "rz", "jx", "jy", "jz")


@dataclass(frozen=True)
class ClosureReport:
    """Integrals that must vanish for a closed filament.

    ``cartesian`` holds ``int j_k dxi``; ``rho_plus``/``rho_minus`` are
    ``int j_rho e^{+-i xi} dxi`` and ``z_integral`` is ``int j_z dxi``.
    """

    cartesian: NDArray[np.float64]
    rho_plus: complex
    rho_minus: complex
    z_integral: float
    tolerance: float

    @property
    def flags(self) -> dict[str, bool]:
        t = self.tolerance
        return {
            "x": abs(self.cartesian[0]) <= t,
            "y": abs(self.cartesian[1]) <= t,
            "z": abs(self.cartesian[2]) <= t,
            "rho_plus": abs(self.rho_plus) <= t,
            "rho_minus": abs(self.rho_minus) <= t,
            "z_cyl": abs(self.z_integral) <= t,
        }

    @property
    def passed(self) -> bool:
        return all(self.flags.values())


def check_closure(field: NDArray[np.float64], rtol: float = CLOSURE_RTOL) -> ClosureReport:
    """Evaluate the closure integrals of a Cartesian tangent field on a uniform grid.

    The tolerance is ``rtol`` times ``2 pi`` times the RMS magnitude of
    the field (plain ``rtol`` for a zero field).
    """
    field = np.asarray(field, dtype=np.float64)
    xi = _spectral.grid(field.shape[0])
    cart = _spectral.periodic_integral(field)
    j_rho = field[:, 0] * np.cos(xi) + field[:, 1] * np.sin(xi)
    rho_plus = complex(_spectral.periodic_integral(j_rho * np.exp(1j * xi)))
    rho_minus = complex(_spectral.periodic_integral(j_rho * np.exp(-1j * xi)))
    z_int = float(_spectral.periodic_integral(field[:, 2]))
    scale = 2.0 * np.pi * float(np.sqrt(np.mean(np.sum(field**2, axis=1))))
    tol = rtol * scale if scale > 0 else rtol
    return ClosureReport(cart, rho_plus, rho_minus, z_int, tol)


@dataclass(frozen=True)
class FilamentCurve:
    """Sampled closed curve with its tangent field.

    ``closed`` is ``False`` when the tangent field failed the closure
    check; ``closure_gap`` is ``|r(2 pi^-) - r(0)|``.
    """

    xi: NDArray[np.float64]
    points: NDArray[np.float64]
    tangent: NDArray[np.float64]
    R0: float
    closure_gap: float
    closed: bool

    @property
    def n_grid(self) -> int:
        return self.xi.size

    def spectral_tangent(self) -> NDArray[np.float64]:
        """``d r / d xi`` by spectral differentiation (valid for closed curves)."""
        return _spectral.derivative(self.points)

    def to_csv(self) -> str:
        rows = np.column_stack([self.xi, self.points, self.tangent])
        return csv_text(CURVE_HEADER, rows)


def full_tangent(state: PerturbationState, tau: float, n_grid: int = 256) -> NDArray[np.float64]:
    """``j0 + epsilon * j_prt`` in Cartesian components."""
    tf = tangent_field(state, tau, n_grid)
    return base_tangent(tf.xi) + state.epsilon * tf.cartesian()


def unit_tangent(state: PerturbationState, tau: float = 0.0, n_grid: int = 256) -> NDArray[np.float64]:
    """``(j0 + epsilon j_prt) / |j0 + epsilon j_prt|``, an admissible nonlinear initial field.

    The perturbation is orthogonal to ``j0``, so the normalization changes
    the field only at second order in ``epsilon``.
    """
    j = full_tangent(state, tau, n_grid)
    return j / np.linalg.norm(j, axis=1, keepdims=True)


def curve_from_tangent(
    field: NDArray[np.float64], offset: NDArray[np.float64], R0: float, rtol: float = CLOSURE_RTOL
) -> FilamentCurve:
    """``r(xi) = offset + R0 int_0^{2pi} [xi - eta] j(eta) d eta``.

    With the floor kernel, ``[xi - eta]`` is 0 for ``eta <= xi`` and -1
    otherwise, so ``r(xi) = offset - R0 int_xi^{2pi} j``.
    """
    field = np.asarray(field, dtype=np.float64)
    xi = _spectral.grid(field.shape[0])
    report = check_closure(field, rtol)
    points = np.asarray(offset, dtype=np.float64)[None, :] - R0 * _spectral.tail_integral(field)
    gap = float(R0 * np.linalg.norm(report.cartesian))
    if not report.passed:
        log.warning("tangent field violates closure; curve gap %.3e", gap)
    return FilamentCurve(xi, points, field.copy(), R0, gap, report.passed)


def reconstruct_curve(
    state: PerturbationState,
    tau: float = 0.0,
    n_grid: int = 256,
    *,
    ring_drift: bool = True,
    include_base: bool = True,
) -> FilamentCurve:
    """Curve of the perturbed ring at time ``tau``.

    Parameters
    ----------
    ring_drift
        Include the self-induced translation ``R0 tau e_z`` of the
        unperturbed ring in the centre. With ``False`` the offset is
        exactly ``q(0) + tau (t0/m0) p``.
    include_base
        Add the unperturbed tangent ``j0``; with ``False`` only
        ``epsilon * j_prt`` is integrated.
    """
    c = state.constants
    if include_base:
        field = full_tangent(state, tau, n_grid)
    else:
        tf = tangent_field(state, tau, n_grid)
        field = state.epsilon * tf.cartesian()
    if ring_drift:
        offset = state.center(tau)
    else:
        offset = state.q0 + tau * (c.t0 / c.m0) * state.p
    return curve_from_tangent(field, offset, c.R0)


def closure_of_spectrum(spectrum: ModeSpectrum, n_grid: int = 256) -> ClosureReport:
    """Closure report of ``j0 + j_prt`` for a unit-amplitude spectrum."""

    st = PerturbationState(UNIT, spectrum)
    return check_closure(full_tangent(st, 0.0, n_grid))
