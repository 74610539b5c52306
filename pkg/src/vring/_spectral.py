"""Uniform periodic grids and FFT-based differentiation on them."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from .errors import ResolutionError

ComplexArray = NDArray[np.complex128]
FloatArray = NDArray[np.float64]


def grid(n: int) -> FloatArray:
    """``xi_k = 2 pi k / n`` for ``k = 0 .. n-1``."""
    if n < 2:
        raise ResolutionError(f"grid needs at least 2 points, got {n}")
    return 2.0 * np.pi * np.arange(n) / n


@lru_cache(maxsize=64)
def wavenumbers(n: int) -> NDArray[np.int64]:
    k = np.fft.fftfreq(n, d=1.0 / n).round().astype(np.int64)
    k.setflags(write=False)
    return k


def band_mask(n: int, k_max: int | None = None) -> NDArray[np.bool_]:
    """Retained wavenumbers: ``|k| <= k_max``, Nyquist always dropped."""
    k = wavenumbers(n)
    keep = np.abs(k) < n / 2
    if k_max is not None:
        keep &= np.abs(k) <= k_max
    return keep


def derivative(f: NDArray, order: int = 1, k_max: int | None = None) -> NDArray:
    """Spectral derivative along axis 0 of periodic samples.

    Wavenumbers above ``k_max`` (and the Nyquist mode) are removed, which
    keeps explicit time stepping stable for stiff grid modes.
    """
    n = f.shape[0]
    k = wavenumbers(n)
    mult = (1j * k) ** order * band_mask(n, k_max)
    shape = (n,) + (1,) * (f.ndim - 1)
    fh = np.fft.fft(f, axis=0) * mult.reshape(shape)
    out = np.fft.ifft(fh, axis=0)
    if np.isrealobj(f):
        return out.real
    return out


def band_limit(f: NDArray, k_max: int | None) -> NDArray:
    """Project samples onto wavenumbers ``|k| <= k_max``."""
    if k_max is None:
        return f
    n = f.shape[0]
    shape = (n,) + (1,) * (f.ndim - 1)
    out = np.fft.ifft(np.fft.fft(f, axis=0) * band_mask(n, k_max).reshape(shape), axis=0)
    return out.real if np.isrealobj(f) else out


def periodic_integral(f: NDArray) -> NDArray:
    """Trapezoidal ``int_0^{2 pi} f dxi`` along axis 0 (spectrally exact)."""
    return 2.0 * np.pi * np.mean(f, axis=0)


def tail_integral(f: NDArray) -> NDArray:
    """``int_xi^{2 pi} f(eta) d eta`` at every grid node, exact for trigonometric data.

    The mean of ``f`` contributes the linear term ``mean * (2 pi - xi)``.
    """
    n = f.shape[0]
    xi = grid(n)
    k = wavenumbers(n)
    shape = (n,) + (1,) * (f.ndim - 1)
    fh = np.fft.fft(f, axis=0) / n
    mean = fh[0]
    kk = k.astype(float).reshape(shape)
    nz = (k != 0).reshape(shape)
    # int_xi^{2pi} e^{ik eta} = (1 - e^{ik xi}) / (ik)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.where(nz, fh / (1j * np.where(nz, kk, 1.0)), 0.0)
    osc = np.sum(g, axis=0) - np.fft.ifft(g * n, axis=0)
    out = osc + mean * (2.0 * np.pi - xi).reshape(shape)
    return out.real if np.isrealobj(f) else out


def fourier_shift(f: NDArray, shift: float) -> NDArray:
    """Trigonometric interpolant of ``f`` evaluated at ``xi_k + shift``."""
    n = f.shape[0]
    k = wavenumbers(n) * band_mask(n)
    shape = (n,) + (1,) * (f.ndim - 1)
    out = np.fft.ifft(np.fft.fft(f, axis=0) * np.exp(1j * k * shift).reshape(shape), axis=0)
    return out.real if np.isrealobj(f) else out
