"""Fourier modes of the complex tangent perturbation ``j_rho + i j_z``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .dispersion import coupling_coefficient, inverse_coupling
from .errors import ConstraintViolation, DomainError, ResolutionError

__all__ = [
    "ModeSpectrum",
    "modes_from_samples",
    "samples_from_modes",
    "enforce_coupling",
    "coupling_residual",
    "random_spectrum",
]

IM_J0_TOL = 1e-12


@dataclass(frozen=True)
class ModeSpectrum:
    """Coefficients ``j_n`` for ``n = -n_max .. n_max``.

    ``coeff[n + n_max]`` holds ``j_n``. The array is copied and frozen on
    construction. Nothing here forces the coupling relations; use
    :func:`enforce_coupling` to build a dynamically admissible spectrum.
    """

    coeff: NDArray[np.complex128]

    def __post_init__(self) -> None:
        c = np.array(self.coeff, dtype=np.complex128, copy=True).reshape(-1)
        if c.size % 2 != 1:
            raise DomainError("coefficient array must have odd length 2*n_max + 1")
        if not np.all(np.isfinite(c)):
            raise DomainError("mode coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeff", c)

    @property
    def n_max(self) -> int:
        return (self.coeff.size - 1) // 2

    @property
    def indices(self) -> NDArray[np.int64]:
        return np.arange(-self.n_max, self.n_max + 1)

    def __getitem__(self, n: int) -> complex:
        if abs(n) > self.n_max:
            return 0j
        return complex(self.coeff[n + self.n_max])

    @classmethod
    def zeros(cls, n_max: int) -> ModeSpectrum:
        if n_max < 0:
            raise DomainError("n_max must be non-negative")
        return cls(np.zeros(2 * n_max + 1, dtype=np.complex128))

    @classmethod
    def from_dict(cls, modes: Mapping[int, complex], n_max: int | None = None) -> ModeSpectrum:
        if n_max is None:
            n_max = max((abs(int(n)) for n in modes), default=0)
        c = np.zeros(2 * n_max + 1, dtype=np.complex128)
        for n, value in modes.items():
            if abs(n) > n_max:
                raise DomainError(f"mode {n} exceeds n_max={n_max}")
            c[int(n) + n_max] = value
        return cls(c)

    @classmethod
    def from_independent(cls, j0: float, negatives: ArrayLike) -> ModeSpectrum:
        """Coupled spectrum from ``j_0`` and ``[j_{-1}, j_{-2}, ...]``."""
        neg = np.asarray(negatives, dtype=np.complex128).reshape(-1)
        n_max = neg.size
        c = np.zeros(2 * n_max + 1, dtype=np.complex128)
        c[n_max] = j0
        c[:n_max] = neg[::-1]
        return enforce_coupling(cls(c))

    def independent(self) -> tuple[float, NDArray[np.complex128]]:
        """``(j_0, [j_{-1}, ..., j_{-n_max}])``: the canonical coordinates."""
        return float(self.coeff[self.n_max].real), self.coeff[: self.n_max][::-1].copy()

    def with_mode(self, n: int, value: complex) -> ModeSpectrum:
        c = self.coeff.copy()
        c[n + self.n_max] = value
        return ModeSpectrum(c)

    def padded(self, n_max: int) -> ModeSpectrum:
        if n_max < self.n_max:
            raise DomainError("cannot pad to a smaller n_max")
        c = np.zeros(2 * n_max + 1, dtype=np.complex128)
        d = n_max - self.n_max
        c[d : d + self.coeff.size] = self.coeff
        return ModeSpectrum(c)

    def as_dict(self) -> dict[int, complex]:
        return {int(n): complex(v) for n, v in zip(self.indices, self.coeff) if v != 0}


def _check_resolution(n_grid: int, n_max: int) -> None:
    if n_grid < 2 * n_max + 2:
        raise ResolutionError(
            f"grid of {n_grid} points cannot resolve modes up to |n|={n_max}; "
            f"need at least {2 * n_max + 2}"
        )


def modes_from_samples(samples: ArrayLike, n_max: int | None = None) -> ModeSpectrum:
    """Discrete Fourier coefficients ``(1/2pi) int j(xi) e^{-i n xi} d xi``.

    ``samples`` are values of the complex field on the uniform grid
    ``xi_k = 2 pi k / N``. The discrete transform is exact for fields
    band-limited below ``N/2``.
    """
    s = np.asarray(samples, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(s)):
        raise DomainError("samples must be finite")
    n_grid = s.size
    if n_max is None:
        n_max = n_grid // 2 - 1
    _check_resolution(n_grid, n_max)
    fh = np.fft.fft(s) / n_grid
    idx = np.arange(-n_max, n_max + 1)
    return ModeSpectrum(fh[idx % n_grid])


def samples_from_modes(spectrum: ModeSpectrum, n_grid: int) -> NDArray[np.complex128]:
    """Evaluate ``sum_n j_n e^{i n xi}`` on the ``n_grid``-point grid."""
    _check_resolution(n_grid, spectrum.n_max)
    fh = np.zeros(n_grid, dtype=np.complex128)
    fh[spectrum.indices % n_grid] = spectrum.coeff
    return np.fft.ifft(fh) * n_grid


def enforce_coupling(spectrum: ModeSpectrum, tol: float = IM_J0_TOL) -> ModeSpectrum:
    """Rebuild the positive-``n`` side from the independent coefficients.

    Sets ``j_1 = -conj(j_{-1})`` and ``j_n = conj(j_{-n}) / c(n)`` for
    ``n >= 2`` and drops the (tolerated) imaginary part of ``j_0``.

    Raises
    ------
    ConstraintViolation
        If ``|Im j_0| > tol``.
    """
    n_max = spectrum.n_max
    c = spectrum.coeff.copy()
    if abs(c[n_max].imag) > tol:
        raise ConstraintViolation(f"Im j_0 = {c[n_max].imag:.3e} exceeds tolerance {tol:g}")
    c[n_max] = c[n_max].real
    if n_max >= 1:
        n = np.arange(1, n_max + 1)
        neg = c[n_max - n]
        # inverse_coupling(1) == -1 reproduces j_1 = -conj(j_{-1}) exactly
        c[n_max + n] = np.conj(neg) * inverse_coupling(n)
    return ModeSpectrum(c)


def coupling_residual(spectrum: ModeSpectrum) -> float:
    """Largest violation of ``conj(j_{-n}) = c(n) j_n`` over ``n = 0 .. n_max``."""
    n_max = spectrum.n_max
    n = np.arange(0, n_max + 1)
    pos = spectrum.coeff[n_max + n]
    neg = spectrum.coeff[n_max - n]
    return float(np.max(np.abs(np.conj(neg) - coupling_coefficient(n) * pos), initial=0.0))


def random_spectrum(
    rng: np.random.Generator, n_max: int, decay: float = 1.0, j0_scale: float = 1.0
) -> ModeSpectrum:
    """Coupled spectrum with Gaussian independent coefficients.

    The dominant member of each ``(n, -n)`` pair has a typical magnitude
    ``exp(-decay * n)``; for ``n >= 2`` this is ``j_n``, since
    ``|j_n| = |j_{-n}| / |c(n)|``.
    """
    n = np.arange(1, n_max + 1)
    env = np.exp(-decay * n) * np.abs(coupling_coefficient(n))
    neg = (rng.standard_normal(n_max) + 1j * rng.standard_normal(n_max)) / np.sqrt(2.0) * env
    return ModeSpectrum.from_independent(j0_scale * float(rng.standard_normal()), neg)
