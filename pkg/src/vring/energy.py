"""Cut-off evaluation of the divergent line-integral energy of a filament."""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from . import _spectral
from .errors import ConstraintViolation, ResolutionError
from .geometry import FilamentCurve

__all__ = ["canonical_energy_cutoff", "energy_divergence_table", "circle_energy_exact"]


def _log_graded_nodes(delta: float, n_quad: int) -> tuple[NDArray, NDArray]:
    """Gauss-Legendre nodes on ``[delta, pi]`` in the variable ``ln u``."""
    s, w = np.polynomial.legendre.leggauss(n_quad)
    s = 0.5 * (s + 1.0)
    w = 0.5 * w
    span = np.log(np.pi / delta)
    u = delta * np.exp(span * s)
    return u, w * u * span


def canonical_energy_cutoff(
    curve: FilamentCurve, Gamma: float, delta: float, n_quad: int = 96
) -> float:
    """``Gamma^2/(8 pi) int int r'(xi).r'(xi') / |r(xi) - r(xi')|`` over ``|xi - xi'| >= delta``.

    The outer integral is the periodic trapezoidal rule on the curve grid.
    The inner integral over the separation ``u`` in ``[delta, 2 pi - delta]``
    uses Gauss-Legendre nodes in ``ln u`` (mirrored about ``pi``), with the
    curve evaluated off-grid by trigonometric interpolation.
    """
    n = curve.n_grid
    if delta < 2.0 * (2.0 * np.pi / n):
        raise ResolutionError(
            f"cutoff {delta:g} is below two grid spacings ({2 * 2 * np.pi / n:g}); refine the curve"
        )
    if delta >= np.pi:
        raise ResolutionError("cutoff must be smaller than pi")
    if not curve.closed:
        raise ConstraintViolation("energy requires a closed curve")
    if Gamma == 0:
        return 0.0
    r = curve.points
    rp = curve.R0 * curve.tangent
    u, w = _log_graded_nodes(delta, n_quad)
    total = 0.0
    for shift_set in (u, 2.0 * np.pi - u):
        for s, ws in zip(shift_set, w):
            rs = _spectral.fourier_shift(r, s)
            rps = _spectral.fourier_shift(rp, s)
            dist = np.linalg.norm(r - rs, axis=1)
            total += ws * np.mean(np.sum(rp * rps, axis=1) / dist)
    return float(Gamma**2 / (8.0 * np.pi) * 2.0 * np.pi * total)


def circle_energy_exact(R0: float, Gamma: float, delta: float) -> float:
    """Closed form for a circle: ``(Gamma^2 R0 / 4)(-2 ln tan(delta/4) - 4 cos(delta/2))``."""
    return Gamma**2 * R0 / 4.0 * (-2.0 * np.log(np.tan(delta / 4.0)) - 4.0 * np.cos(delta / 2.0))


def energy_divergence_table(
    curve: FilamentCurve, Gamma: float, deltas: NDArray[np.float64] | list[float]
) -> NDArray[np.float64]:
    """Rows ``(delta, E(delta))``."""
    return np.array([[d, canonical_energy_cutoff(curve, Gamma, d)] for d in deltas])
