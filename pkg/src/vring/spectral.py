"""Closed-form evolution of the linearized perturbation modes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from . import _spectral
from .dispersion import dispersion
from .modes import ModeSpectrum, enforce_coupling, samples_from_modes
from .state import PerturbationState

__all__ = [
    "evolve_modes",
    "evolve_state",
    "TangentField",
    "tangent_field",
    "cylindrical_to_cartesian",
    "base_tangent",
]


def evolve_modes(spectrum: ModeSpectrum, tau: float, *, method: str = "all") -> ModeSpectrum:
    """Rotate each coefficient by ``exp(i n sqrt(n^2-1) tau)``.

    ``method="all"`` rotates every coefficient; ``method="independent"``
    rotates ``j_0, j_{-1}, j_{-2}, ...`` only and rebuilds the positive
    side through the coupling relation. On a coupled spectrum the two
    agree to rounding.
    """
    n = spectrum.indices
    phase = np.exp(1j * dispersion(n) * tau)
    if method == "all":
        return ModeSpectrum(spectrum.coeff * phase)
    if method == "independent":
        c = spectrum.coeff * phase
        c[spectrum.n_max + 1 :] = 0.0
        return enforce_coupling(ModeSpectrum(c))
    raise ValueError(f"unknown method {method!r}")


def evolve_state(state: PerturbationState, tau: float) -> PerturbationState:
    """State whose spectrum has been advanced to ``tau``; ``q0`` and ``p`` are constants of motion."""
    return state.replace(spectrum=evolve_modes(state.spectrum, tau))


def base_tangent(xi: NDArray[np.float64]) -> NDArray[np.float64]:
    """Unperturbed unit tangent ``j0 = (-sin xi, cos xi, 0) = e_phi``."""
    return np.column_stack([-np.sin(xi), np.cos(xi), np.zeros_like(xi)])


def cylindrical_to_cartesian(xi: NDArray[np.float64], cyl: NDArray[np.float64]) -> NDArray[np.float64]:
    """Map ``(j_rho, j_phi, j_z)`` in the local basis at ``xi`` to Cartesian components."""
    c, s = np.cos(xi), np.sin(xi)
    rho, phi, z = cyl[:, 0], cyl[:, 1], cyl[:, 2]
    return np.column_stack([rho * c - phi * s, rho * s + phi * c, z])


@dataclass(frozen=True)
class TangentField:
    xi: NDArray[np.float64]
    complex_field: NDArray[np.complex128]
    cylindrical: NDArray[np.float64]

    def cartesian(self) -> NDArray[np.float64]:
        """Perturbation amplitude in Cartesian components."""
        return cylindrical_to_cartesian(self.xi, self.cylindrical)


def tangent_field(state: PerturbationState, tau: float, n_grid: int = 256) -> TangentField:
    """Sample ``j(tau, xi) = sum_n j_n exp(i[n xi + omega(n) tau])`` on the grid.

    The cylindrical field is ``(Re j, j_phi0, Im j)``; since ``j_phi0 = 0``
    the perturbation is orthogonal to ``j0`` by construction.
    """
    xi = _spectral.grid(n_grid)
    z = samples_from_modes(evolve_modes(state.spectrum, tau), n_grid)
    cyl = np.column_stack([z.real, np.full(n_grid, state.j_phi0), z.imag])
    return TangentField(xi, z, cyl)
