"""Dispersion law and conjugate-coupling coefficients of the ring modes."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError

__all__ = ["dispersion", "coupling_coefficient", "inverse_coupling", "dispersion_table"]


def dispersion(n: ArrayLike) -> NDArray[np.float64] | float:
    """Angular frequency ``n * sqrt(n**2 - 1)`` of mode ``n``.

    Evaluated as ``n * sqrt((n - 1) * (n + 1))``; the product is an exact
    integer in double precision, so the result is correctly rounded up to
    one multiplication. Modes ``0`` and ``+-1`` are zero modes. The
    result is odd in ``n`` and always real.
    """
    n_arr = np.asarray(n)
    if not np.issubdtype(n_arr.dtype, np.integer):
        if not np.all(n_arr == np.round(n_arr)):
            raise DomainError("mode index must be an integer")
    nf = n_arr.astype(np.float64)
    a = np.abs(nf)
    out = np.where(a >= 1.0, nf * np.sqrt(np.maximum((a - 1.0) * (a + 1.0), 0.0)), 0.0)
    return float(out) if out.ndim == 0 else out


def coupling_coefficient(n: ArrayLike) -> NDArray[np.float64] | float:
    """Coefficient ``c(n) = 2 [n sqrt(n^2-1) - n^2 + 1/2]`` linking ``n`` and ``-n``.

    For ``n >= 1`` this equals ``-(n - sqrt(n^2 - 1))**2 = -1/(n + sqrt(n^2-1))**2``,
    which is used here because the direct form cancels catastrophically.
    ``c(0) = 1`` and ``c(1) = -1``.
    """
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise DomainError("coupling coefficient is defined for n >= 0")
    nf = n_arr.astype(np.float64)
    s = nf + np.sqrt(np.maximum((nf - 1.0) * (nf + 1.0), 0.0))
    with np.errstate(divide="ignore"):
        out = np.where(nf == 0, 1.0, -1.0 / (s * s))
    return float(out) if out.ndim == 0 else out


def inverse_coupling(n: ArrayLike) -> NDArray[np.float64] | float:
    """``1 / c(n)`` evaluated without division: ``-(n + sqrt(n^2 - 1))**2``."""
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise DomainError("coupling coefficient is defined for n >= 0")
    nf = n_arr.astype(np.float64)
    s = nf + np.sqrt(np.maximum((nf - 1.0) * (nf + 1.0), 0.0))
    out = np.where(nf == 0, 1.0, -(s * s))
    return float(out) if out.ndim == 0 else out


def dispersion_table(n_max: int) -> NDArray[np.float64]:
    """Rows ``(n, omega(n), c(n))`` for ``n = 0 .. n_max``."""
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    n = np.arange(n_max + 1)
    return np.column_stack([n.astype(float), dispersion(n), coupling_coefficient(n)])
