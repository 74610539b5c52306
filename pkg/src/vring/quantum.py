"""Truncated-Fock-space realization of the quantized ring.

Oscillator mode 1 carries the coherent (displaced) factor that solves the
quantized momentum constraint; modes ``n >= 2`` carry the excitations
that set the internal energy. Mode ``n`` is the quantum of ``j_{-n}``:
``j_{-n} -> sqrt(hbar / (t0 E0)) a_n``.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import lru_cache, reduce

import numpy as np
import scipy.sparse as sp
from numpy.typing import ArrayLike, NDArray

from .constants import LAMBDA0, UNIT, PhysicalConstants
from .dispersion import dispersion
from .errors import DomainError, TruncationError

__all__ = [
    "FockVector",
    "QuantumState",
    "ladder",
    "coherent_alpha",
    "coherent_state",
    "annihilation_residual",
    "physical_amplitude",
    "fock_overlap_amplitude",
    "energy_eigenvalue",
    "MatrixHamiltonianReport",
    "matrix_hamiltonian_check",
    "phi0_expectation",
    "circulation_density",
]

DEFAULT_DIM = 128
NORM_DEFICIT_TOL = 1e-8
MAX_EXCITED_DIM = 8


@dataclass(frozen=True)
class FockVector:
    """Amplitudes over occupation numbers ``0 .. D-1`` of one oscillator."""

    amplitudes: NDArray[np.complex128]

    def __post_init__(self) -> None:
        a = np.array(self.amplitudes, dtype=np.complex128, copy=True).reshape(-1)
        if not np.all(np.isfinite(a)):
            raise DomainError("Fock amplitudes must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> FockVector:
        return FockVector(self.amplitudes / self.norm())

    @classmethod
    def number_state(cls, m: int, dim: int = DEFAULT_DIM) -> FockVector:
        v = np.zeros(dim, dtype=np.complex128)
        v[m] = 1.0
        return cls(v)


@lru_cache(maxsize=32)
def ladder(dim: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Truncated ``(a, a^+)`` with ``a|m> = sqrt(m)|m-1>``."""
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=np.float64)), k=1)
    ad = a.T.copy()
    a.setflags(write=False)
    ad.setflags(write=False)
    return a, ad


def coherent_alpha(p: complex, lam: float, constants: PhysicalConstants = UNIT) -> complex:
    """Annihilation eigenvalue ``p / (2 pi lam sqrt(hbar p0 / R0))``."""
    if lam == 0:
        raise DomainError("lambda = 0 is a singular point")
    c = constants
    return complex(p) / (2.0 * np.pi * lam * np.sqrt(c.hbar * c.p0 / c.R0))


def coherent_state(alpha: complex, dim: int = DEFAULT_DIM) -> FockVector:
    """``exp(-|alpha|^2/2) alpha^m / sqrt(m!)`` for ``m < dim``.

    Raises
    ------
    TruncationError
        If ``dim < 16``, ``|alpha|^2 > dim/4`` or the truncated norm
        falls short of one by more than ``1e-8``.
    """
    if dim < 16:
        raise TruncationError(f"Fock dimension {dim} is below the minimum of 16")
    alpha = complex(alpha)
    if abs(alpha) ** 2 > dim / 4.0:
        raise TruncationError(f"|alpha|^2 = {abs(alpha) ** 2:.3g} exceeds dim/4 = {dim / 4:g}")
    v = np.empty(dim, dtype=np.complex128)
    v[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for m in range(1, dim):
        v[m] = v[m - 1] * alpha / np.sqrt(m)
    deficit = 1.0 - float(np.vdot(v, v).real)
    if deficit > NORM_DEFICIT_TOL:
        raise TruncationError(f"coherent state loses {deficit:.2e} of its norm at dim {dim}")
    return FockVector(v)


@dataclass(frozen=True)
class QuantumState:
    """Transverse momentum, circulation, excitation multiset and mode-1 factor."""

    p: complex
    lam: float
    excitations: tuple[int, ...]
    mode1: FockVector
    constants: PhysicalConstants = UNIT

    def __post_init__(self) -> None:
        ex = tuple(sorted(int(n) for n in self.excitations))
        if any(n < 2 for n in ex):
            raise DomainError("excited modes must have n >= 2")
        object.__setattr__(self, "excitations", ex)
        object.__setattr__(self, "p", complex(self.p))

    @property
    def alpha(self) -> complex:
        return coherent_alpha(self.p, self.lam, self.constants)

    @classmethod
    def coherent(
        cls,
        p: complex,
        lam: float = LAMBDA0,
        excitations: Sequence[int] = (),
        constants: PhysicalConstants = UNIT,
        dim: int = DEFAULT_DIM,
    ) -> QuantumState:
        """The constraint solution ``a+_{n1}..a+_{nk} |p/lam>``."""
        mode1 = coherent_state(coherent_alpha(p, lam, constants), dim)
        return cls(p, lam, tuple(excitations), mode1, constants)


def _constraint_factor(lam: float, c: PhysicalConstants) -> float:
    return 2.0 * np.pi * lam * c.p0 * np.sqrt(c.hbar / (c.t0 * c.E0))


def annihilation_residual(state: QuantumState) -> float:
    """``||(p - 2 pi lam p0 sqrt(hbar/(t0 E0)) a) psi|| / ||p psi||`` on mode 1.

    Excitations in modes ``n >= 2`` commute with ``a = a_1`` and drop out.
    When ``p psi`` vanishes the absolute residual is returned.
    """
    v = state.mode1.amplitudes
    a, _ = ladder(v.size)
    kappa = _constraint_factor(state.lam, state.constants)
    num = float(np.linalg.norm(state.p * v - kappa * (a @ v)))
    den = float(np.linalg.norm(state.p * v))
    return num / den if den > 0 else num


def physical_amplitude(
    p: complex,
    lam: float,
    excitations: Sequence[int] = (),
    phi: complex = 1.0,
    constants: PhysicalConstants = UNIT,
) -> complex:
    """``phi * exp[-(|p|^2 R0 / (8 hbar p0)) (lambda0/lam - 1)^2]``.

    The excitation multiset only selects the wave function ``phi``.
    """
    if lam == 0:
        raise DomainError("lambda = 0 is a singular point of the amplitude")
    _validate_excitations(excitations)
    c = constants
    expo = -(abs(p) ** 2) * c.R0 / (8.0 * c.hbar * c.p0) * (LAMBDA0 / lam - 1.0) ** 2
    return complex(phi) * np.exp(expo)


def fock_overlap_amplitude(
    p: complex, lam: float, constants: PhysicalConstants = UNIT, dim: int = DEFAULT_DIM
) -> complex:
    """``<p/lam | p/lambda0>`` computed from truncated coherent vectors."""
    bra = coherent_state(coherent_alpha(p, lam, constants), dim)
    ket = coherent_state(coherent_alpha(p, LAMBDA0, constants), dim)
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


def _validate_excitations(excitations: Sequence[int]) -> tuple[int, ...]:
    ex = tuple(int(n) for n in excitations)
    if any(n < 2 for n in ex):
        raise DomainError(f"excited modes must have n >= 2, got {ex}")
    return ex


def energy_eigenvalue(
    p: complex, excitations: Sequence[int] = (), constants: PhysicalConstants = UNIT
) -> float:
    """``|p|^2 / 2 m0 + (hbar / t0) sum_j n_j sqrt(n_j^2 - 1)``."""
    ex = _validate_excitations(excitations)
    c = constants
    internal = float(np.sum(dispersion(np.array(ex, dtype=np.int64)))) if ex else 0.0
    return abs(p) ** 2 / (2.0 * c.m0) + c.hbar / c.t0 * internal


@dataclass(frozen=True)
class MatrixHamiltonianReport:
    expected: float
    rayleigh: float
    residual: float
    dims: dict[int, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.residual <= 1e-8


def matrix_hamiltonian_check(
    p: complex,
    excitations: Sequence[int] = (),
    dim: int = 32,
    constants: PhysicalConstants = UNIT,
) -> MatrixHamiltonianReport:
    """Apply the dense Hamiltonian to ``a+_{n1}..a+_{nk}|p/lambda0>`` and compare with the spectrum.

    The tensor product holds mode 1 (dimension ``dim``) and one small
    factor per distinct excited mode. Mode 1 enters the Hamiltonian with
    frequency ``1 * sqrt(0) = 0``, which is why the coherent factor does
    not disturb the eigenvalue.
    """
    ex = _validate_excitations(excitations)
    if len(ex) > 3 or any(n > 6 for n in ex):
        raise DomainError("matrix check supports at most 3 excitations with n <= 6")
    if dim < 32:
        raise TruncationError("matrix check needs a mode-1 dimension of at least 32")
    c = constants
    counts = Counter(ex)
    modes = [1] + sorted(counts)
    dims = {1: dim}
    for n in modes[1:]:
        dims[n] = counts[n] + 2
        if dims[n] > MAX_EXCITED_DIM:
            raise TruncationError(f"mode {n} needs dimension {dims[n]} > {MAX_EXCITED_DIM}")

    def embed(op: NDArray, mode: int) -> sp.csr_matrix:
        factors = [sp.csr_matrix(op) if m == mode else sp.identity(dims[m], format="csr") for m in modes]
        return reduce(lambda x, y: sp.kron(x, y, format="csr"), factors)

    total = int(np.prod([dims[m] for m in modes]))
    ham = sp.identity(total, format="csr") * (abs(p) ** 2 / (2.0 * c.m0))
    for m in modes:
        a, ad = ladder(dims[m])
        ham = ham + (c.hbar / c.t0) * float(dispersion(m)) * embed(ad @ a, m)

    coh = coherent_state(coherent_alpha(p, LAMBDA0, c), dim).amplitudes
    factors = [coh] + [np.eye(dims[m])[0] for m in modes[1:]]
    v = reduce(np.kron, factors).astype(np.complex128)
    for n in ex:
        v = embed(ladder(dims[n])[1], n) @ v

    expected = energy_eigenvalue(p, ex, c)
    hv = ham @ v
    vv = float(np.vdot(v, v).real)
    rayleigh = float(np.vdot(v, hv).real / vv)
    ref = abs(expected) * np.sqrt(vv)
    res = float(np.linalg.norm(hv - expected * v))
    residual = res / ref if ref > 0 else res / np.sqrt(vv)
    return MatrixHamiltonianReport(expected, rayleigh, float(residual), dims)


def phi0_expectation(
    p: complex,
    lam: float = LAMBDA0,
    dim: int = DEFAULT_DIM,
    constants: PhysicalConstants = UNIT,
    mode1: FockVector | None = None,
) -> complex:
    """``<psi| p j+ - conj(p) j |psi>`` with ``j = sqrt(hbar/(t0 E0)) a`` on mode 1.

    ``mode1`` defaults to the coherent solution ``|p/lam>``. The result is
    normalized by ``<psi|psi>``.
    """
    c = constants
    if mode1 is None:
        mode1 = coherent_state(coherent_alpha(p, lam, c), dim)
    v = mode1.amplitudes
    a, ad = ladder(v.size)
    s = np.sqrt(c.hbar / (c.t0 * c.E0))
    op_v = s * (p * (ad @ v) - np.conj(p) * (a @ v))
    return complex(np.vdot(v, op_v) / np.vdot(v, v).real)


def circulation_density(
    p: complex,
    excitations: Sequence[int],
    lam_grid: ArrayLike,
    constants: PhysicalConstants = UNIT,
) -> NDArray[np.float64]:
    """Rows ``(lambda, Gamma, |amplitude|^2)`` with ``phi = 1``; not normalized over ``lambda``."""
    lam = np.asarray(lam_grid, dtype=np.float64).reshape(-1)
    if np.any(lam == 0):
        raise DomainError("the lambda grid must exclude 0")
    _validate_excitations(excitations)
    c = constants
    expo = -(abs(p) ** 2) * c.R0 / (8.0 * c.hbar * c.p0) * (LAMBDA0 / lam - 1.0) ** 2
    return np.column_stack([lam, lam * c.R0**2 / c.t0, np.exp(2.0 * expo)])
