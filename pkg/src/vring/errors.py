"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class VringError(Exception):
    """Base class for every error raised by :mod:`vring`."""


class DomainError(VringError, ValueError):
    """An argument lies outside the domain of the operation."""


class ResolutionError(VringError, ValueError):
    """The sampling grid is too coarse for the requested operation."""


class ConstraintViolation(VringError, ValueError):
    """A state violates a constraint it is required to satisfy."""


class ConsistencyError(VringError, RuntimeError):
    """Two independent evaluations of the same quantity disagree."""


class StepSizeError(VringError, RuntimeError):
    """A time step produced a blow-up of the field."""


class IntegrationError(VringError, RuntimeError):
    """The nonlinear integrator drifted off the unit-norm manifold."""


class TruncationError(VringError, ValueError):
    """A truncated Fock space is too small for the requested state."""


class UndeterminedCirculation(VringError, ValueError):
    """The circulation cannot be recovered because p or j_{-1} vanishes."""


class NotOnConstraintSurface(ConstraintViolation):
    """The transverse momentum is not parallel to the j_{-1} mode."""


class HamiltonConsistencyError(ConsistencyError):
    """Bracket, series and finite-difference time derivatives disagree."""
