"""Classical perturbation state and its JSON serialization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from os import PathLike
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .constants import PhysicalConstants, UNIT
from .errors import ConstraintViolation, DomainError
from .modes import ModeSpectrum, enforce_coupling

__all__ = [
    "PerturbationState",
    "StateFormatError",
    "unperturbed_state",
    "state_from_dict",
    "state_to_dict",
    "load_state",
    "dump_state",
]


class StateFormatError(DomainError):
    """A state file is malformed; ``line``/``column`` locate JSON syntax errors."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


def _vec3(x: ArrayLike, name: str) -> NDArray[np.float64]:
    v = np.array(x, dtype=np.float64, copy=True).reshape(-1)
    if v.shape != (3,):
        raise DomainError(f"{name} must have 3 components")
    if not np.all(np.isfinite(v)):
        raise DomainError(f"{name} must be finite")
    v.setflags(write=False)
    return v


@dataclass(frozen=True)
class PerturbationState:
    """Full classical state of the perturbed ring.

    ``q0`` are the centre coordinates at ``tau = 0`` and ``p`` the planar
    (Hamiltonian) momentum; on the constraint surface ``p[2] == 0``.
    ``epsilon`` multiplies the perturbation explicitly: mode amplitudes
    are O(1). Only ``j_phi0 == 0`` is supported.
    """

    constants: PhysicalConstants
    spectrum: ModeSpectrum
    q0: NDArray[np.float64] = field(default_factory=lambda: np.zeros(3))
    p: NDArray[np.float64] = field(default_factory=lambda: np.zeros(3))
    epsilon: float = 1.0
    j_phi0: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "q0", _vec3(self.q0, "q0"))
        object.__setattr__(self, "p", _vec3(self.p, "p"))
        if self.j_phi0 != 0.0:
            raise DomainError("only the j_phi0 = 0 branch is supported")
        if not math.isfinite(self.epsilon):
            raise DomainError("epsilon must be finite")

    @property
    def n_max(self) -> int:
        return self.spectrum.n_max

    @property
    def p_complex(self) -> complex:
        """Transverse momentum ``p_x + i p_y``."""
        return complex(self.p[0], self.p[1])

    @property
    def j_minus1(self) -> complex:
        return self.spectrum[-1]

    def center(self, tau: float) -> NDArray[np.float64]:
        """Centre ``q(0) + tau (t0/m0) p`` plus the self-induced drift ``R0 tau e_z``.

        The unperturbed ring moves along its axis at ``p0/m0 = R0/t0``;
        ``p`` carries only the perturbation momentum.
        """
        c = self.constants
        q = self.q0 + tau * (c.t0 / c.m0) * self.p
        q = q.copy()
        q[2] += c.R0 * tau
        return q

    def replace(self, **changes: Any) -> PerturbationState:
        return replace(self, **changes)


def unperturbed_state(constants: PhysicalConstants = UNIT, n_max: int = 1) -> PerturbationState:
    """The bare ring ``j = j0`` centred at the origin."""
    return PerturbationState(constants, ModeSpectrum.zeros(n_max), epsilon=0.0)


_TOP_KEYS = {"constants", "epsilon", "j_phi0", "q0", "p", "modes"}
_CONST_KEYS = {"R0", "t0", "m0", "hbar"}
_MODE_KEYS = {"n", "re", "im"}


def _reject_unknown(obj: dict, allowed: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise StateFormatError(f"{where} must be a JSON object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise StateFormatError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    missing = sorted(allowed - set(obj))
    if missing:
        raise StateFormatError(f"missing key(s) in {where}: {', '.join(missing)}")


def state_from_dict(data: dict[str, Any], coupling_rtol: float = 1e-9) -> PerturbationState:
    """Validate a decoded state document and build the state.

    Only ``n <= 0`` modes are independent. Entries with ``n > 0`` are
    accepted only when they agree with the coupled value.
    """
    if not isinstance(data, dict):
        raise StateFormatError("state document must be a JSON object")
    _reject_unknown(data, _TOP_KEYS, "state")
    if not isinstance(data["constants"], dict) or not isinstance(data["modes"], list):
        raise StateFormatError("constants must be an object and modes a list")
    if not all(isinstance(m, dict) for m in data["modes"]):
        raise StateFormatError("every mode must be an object")
    _reject_unknown(data["constants"], _CONST_KEYS, "constants")
    try:
        constants = PhysicalConstants(**{k: float(v) for k, v in data["constants"].items()})
    except (TypeError, ValueError) as exc:
        raise StateFormatError(str(exc)) from exc
    if float(data["j_phi0"]) != 0.0:
        raise StateFormatError("j_phi0 must be 0")
    raw: dict[int, complex] = {}
    for i, m in enumerate(data["modes"]):
        _reject_unknown(m, _MODE_KEYS, f"modes[{i}]")
        n = m["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise StateFormatError(f"modes[{i}].n must be an integer")
        if n in raw:
            raise StateFormatError(f"mode {n} listed twice")
        raw[n] = complex(float(m["re"]), float(m["im"]))
    n_max = max([1] + [abs(n) for n in raw])
    independent = ModeSpectrum.from_dict({n: v for n, v in raw.items() if n <= 0}, n_max)
    try:
        spectrum = enforce_coupling(independent)
    except ConstraintViolation as exc:
        raise StateFormatError(str(exc)) from exc
    for n, v in raw.items():
        if n > 0 and abs(v - spectrum[n]) > coupling_rtol * max(1.0, abs(spectrum[n])):
            raise StateFormatError(
                f"mode {n} = {v} is inconsistent with the coupled value {spectrum[n]}"
            )
    try:
        return PerturbationState(
            constants,
            spectrum,
            q0=data["q0"],
            p=data["p"],
            epsilon=float(data["epsilon"]),
        )
    except DomainError as exc:
        raise StateFormatError(str(exc)) from exc


def state_to_dict(state: PerturbationState) -> dict[str, Any]:
    """Document with the independent modes only (``n <= 0``)."""
    modes = [
        {"n": int(n), "re": float(state.spectrum[n].real), "im": float(state.spectrum[n].imag)}
        for n in range(0, -state.n_max - 1, -1)
    ]
    return {
        "constants": state.constants.as_dict(),
        "epsilon": float(state.epsilon),
        "j_phi0": 0,
        "q0": [float(x) for x in state.q0],
        "p": [float(x) for x in state.p],
        "modes": modes,
    }


def load_state(source: str | PathLike[str]) -> PerturbationState:
    text = Path(source).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"malformed JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    try:
        return state_from_dict(data)
    except StateFormatError:
        raise
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"invalid state value: {exc}") from exc


def dump_state(state: PerturbationState) -> str:
    return json.dumps(state_to_dict(state), indent=2) + "\n"
