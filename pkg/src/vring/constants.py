"""Dimensional constants of the vortex-ring model."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = ["PhysicalConstants", "derive_constants", "LAMBDA0"]

#: Dimensionless circulation of the unperturbed ring.
LAMBDA0 = 1.0 / math.pi


@dataclass(frozen=True)
class PhysicalConstants:
    """Length, time, mass and action scales plus the derived scales.

    ``p0`` is the momentum of the unperturbed ring, ``E0`` the energy
    scale, ``Gamma0`` the unperturbed circulation and ``lambda0`` its
    dimensionless value.
    """

    R0: float
    t0: float
    m0: float
    hbar: float

    def __post_init__(self) -> None:
        for name in ("R0", "t0", "m0", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be strictly positive and finite, got {value!r}")

    @property
    def p0(self) -> float:
        return self.m0 * self.R0 / self.t0

    @property
    def E0(self) -> float:
        return self.m0 * self.R0**2 / self.t0**2

    @property
    def Gamma0(self) -> float:
        return self.R0**2 / (math.pi * self.t0)

    @property
    def lambda0(self) -> float:
        return LAMBDA0

    def gamma_from_lambda(self, lam: float) -> float:
        """Circulation ``lam * R0**2 / t0`` for a dimensionless value."""
        return lam * self.R0**2 / self.t0

    def lambda_from_gamma(self, gamma: float) -> float:
        return gamma * self.t0 / self.R0**2

    def as_dict(self) -> dict[str, float]:
        return {"R0": self.R0, "t0": self.t0, "m0": self.m0, "hbar": self.hbar}


def derive_constants(R0: float, t0: float, m0: float, hbar: float) -> PhysicalConstants:
    """Build a :class:`PhysicalConstants` record, validating every input.

    Raises
    ------
    DomainError
        If any input is not strictly positive; the message names it.
    """
    return PhysicalConstants(float(R0), float(t0), float(m0), float(hbar))


UNIT = PhysicalConstants(1.0, 1.0, 1.0, 1.0)
