"""Impulse, momentum, circulation, constraints, Hamiltonian and Poisson brackets.

Bracket convention: ``{p_i, q_j} = +delta_ij`` and
``{j_m, conj j_n} = (i / (E0 t0)) delta_mn`` for ``m, n = -1, -2, ...``.
This is the opposite sign to the common ``{q, p} = 1`` convention, and
Hamilton's equations read ``dA/dt = {H, A}``.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from . import _spectral
from .constants import PhysicalConstants
from .dispersion import dispersion
from .errors import (
    ConsistencyError,
    DomainError,
    HamiltonConsistencyError,
    NotOnConstraintSurface,
    UndeterminedCirculation,
)
from .modes import ModeSpectrum
from .spectral import base_tangent, evolve_modes, evolve_state, tangent_field
from .state import PerturbationState

__all__ = [
    "ImpulseDecomposition",
    "kernel_weights",
    "impulse_bilinear",
    "impulse_double_integral",
    "f_perp_reduced",
    "impulse_f",
    "momentum",
    "on_shell_state",
    "recover_circulation",
    "ConstraintReport",
    "constraints",
    "phi0",
    "hamiltonian",
    "h0",
    "gradient",
    "poisson_bracket",
    "field_value",
    "bracket_series",
    "time_derivative_fd",
    "HamiltonReport",
    "verify_hamilton_equations",
]

IMPULSE_TOL = 1e-8
CONSTRAINT_TOL = 1e-10

Observable = Callable[[PerturbationState], complex]


# --------------------------------------------------------------------------
# hydrodynamic impulse


@lru_cache(maxsize=16)
def kernel_weights(n_grid: int) -> NDArray[np.float64]:
    """Quadrature weights ``W[k, l]`` for the floor kernel ``[xi - eta]``.

    ``sum_{k,l} W[k,l] g(xi_k) h(eta_l)`` equals
    ``int int [xi - eta] g(xi) h(eta) dxi deta`` exactly when ``g`` and
    ``h`` are trigonometric polynomials of degree below ``n_grid / 2``.
    Off the diagonal ``W`` is ``h**2`` times the floor kernel with its
    sawtooth part replaced by the band-limited series ``sum sin(m x)/m``.
    """
    n = n_grid
    xi = _spectral.grid(n)
    m = np.arange(1, (n + 1) // 2)
    saw = np.sin(np.outer(xi, m)) @ (1.0 / m)  # S(xi_d), d = 0..n-1
    d = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    w = 4.0 * np.pi * (saw[d] - saw[:, None] + saw[None, :]) - 2.0 * np.pi**2
    w /= n * n
    w.setflags(write=False)
    return w


def impulse_bilinear(a: NDArray[np.float64], b: NDArray[np.float64]) -> NDArray[np.float64]:
    """``(1/2) int int [xi - eta] a(eta) x b(xi) dxi deta`` by O(N^2) quadrature."""
    w = kernel_weights(a.shape[0])
    wa = w @ a  # row k: sum_l W[k,l] a(eta_l)
    return 0.5 * np.sum(np.cross(wa, b), axis=0)


def impulse_double_integral(field: NDArray[np.float64]) -> NDArray[np.float64]:
    """The impulse vector ``f`` of a Cartesian tangent field."""
    field = np.asarray(field, dtype=np.float64)
    return impulse_bilinear(field, field)


def f_perp_reduced(perturbation: NDArray[np.float64]) -> complex:
    """``int j_z e_phi dxi`` as ``x + i y``; the single-integral form of ``f_perp``."""
    xi = _spectral.grid(perturbation.shape[0])
    return complex(_spectral.periodic_integral(perturbation[:, 2] * 1j * np.exp(1j * xi)))


@dataclass(frozen=True)
class ImpulseDecomposition:
    """Impulse ``f = pi (1 + 2 eps j_phi0) e_z - eps f_perp`` and derived momenta.

    ``f_perp`` comes from the double integral and ``f_perp_reduced`` from
    the single integral; the momentum fields are filled by
    :func:`momentum` only.
    """

    f: NDArray[np.float64]
    f_perp: complex
    f_perp_reduced: complex
    p_parallel: float | None = None
    p_perp: complex | None = None
    Gamma: float | None = None
    lam: float | None = None
    p: NDArray[np.float64] | None = field(default=None)


def impulse_f(
    perturbation: NDArray[np.float64], epsilon: float = 1.0, tol: float = IMPULSE_TOL
) -> ImpulseDecomposition:
    """First-order impulse of ``j0 + epsilon * perturbation``.

    The linear response is the polarization of the O(N^2) double
    integral, ``B(j0, d) + B(d, j0)``, which is compared with the
    single-integral reduction of ``f_perp``.

    Raises
    ------
    ConsistencyError
        If the two forms differ by more than ``tol`` (relative to
        ``max(1, |f_perp|)``); this signals a closure violation.
    """
    d = np.asarray(perturbation, dtype=np.float64)
    j0 = base_tangent(_spectral.grid(d.shape[0]))
    f0 = impulse_double_integral(j0)
    lin = impulse_bilinear(j0, d) + impulse_bilinear(d, j0)
    fp = complex(-lin[0], -lin[1])
    fr = f_perp_reduced(d)
    if abs(fp - fr) > tol * max(1.0, abs(fr)):
        raise ConsistencyError(
            f"double-integral f_perp {fp:.12g} disagrees with reduction {fr:.12g}"
        )
    return ImpulseDecomposition(f0 + epsilon * lin, fp, fr)


def momentum(
    state: PerturbationState, Gamma: float | None = None, n_grid: int = 256
) -> ImpulseDecomposition:
    """Momentum implied by the tangent field and circulation.

    ``p = (m0 Gamma / R0) f`` (the hydrodynamic impulse rescaled by
    ``m0 / R0**3``) and ``p_perp = (m0 Gamma / R0) f_perp``, which equals
    ``(2 pi m0 Gamma / R0) j_{-1}``. ``Gamma`` defaults to ``Gamma0``.
    """
    c = state.constants
    if Gamma is None:
        Gamma = c.Gamma0
    d = tangent_field(state, 0.0, n_grid).cartesian()
    imp = impulse_f(d, state.epsilon)
    scale = c.m0 * Gamma / c.R0
    return ImpulseDecomposition(
        imp.f,
        imp.f_perp,
        imp.f_perp_reduced,
        p_parallel=float(scale * imp.f[2]),
        p_perp=scale * imp.f_perp,
        Gamma=float(Gamma),
        lam=c.lambda_from_gamma(Gamma),
        p=scale * imp.f,
    )


def on_shell_state(
    spectrum: ModeSpectrum,
    constants: PhysicalConstants,
    lam: float | None = None,
    q0=(0.0, 0.0, 0.0),
    epsilon: float = 1.0,
) -> PerturbationState:
    """State with ``p = 2 pi lam p0 j_{-1}`` (planar), hence ``Phi0 = Phi1 = 0``."""
    if lam is None:
        lam = constants.lambda0
    pc = 2.0 * np.pi * lam * constants.p0 * spectrum[-1]
    return PerturbationState(constants, spectrum, q0=q0, p=[pc.real, pc.imag, 0.0], epsilon=epsilon)


# --------------------------------------------------------------------------
# circulation and constraints


def phi0(p: complex, j_minus1: complex) -> complex:
    """``p conj(j_{-1}) - conj(p) j_{-1}``; purely imaginary."""
    return p * np.conj(j_minus1) - np.conj(p) * j_minus1


def recover_circulation(
    p: complex, j_minus1: complex, constants: PhysicalConstants, tol: float = CONSTRAINT_TOL
) -> tuple[float, float]:
    """Return ``(lambda, Gamma)`` with ``p = 2 pi lambda p0 j_{-1}``.

    Raises
    ------
    UndeterminedCirculation
        If ``p`` or ``j_{-1}`` is zero.
    NotOnConstraintSurface
        If ``|Phi0|`` exceeds ``tol * |p| |j_{-1}|``.
    """
    p, j = complex(p), complex(j_minus1)
    if p == 0 or j == 0:
        raise UndeterminedCirculation("circulation is undetermined where p or j_{-1} vanishes")
    cross = p * np.conj(j)
    if 2.0 * abs(cross.imag) > tol * abs(p) * abs(j):
        raise NotOnConstraintSurface(f"Phi0 = {2j * cross.imag:.3e}: p is not parallel to j_-1")
    sign = 1.0 if cross.real >= 0 else -1.0
    lam = sign * abs(p) / (2.0 * np.pi * constants.p0 * abs(j))
    return float(lam), constants.gamma_from_lambda(lam)


@dataclass(frozen=True)
class ConstraintReport:
    """``phi0`` is the imaginary part of ``Phi0``; recovered values are ``None`` when undetermined."""

    phi0: float
    phi1: float
    phi2: float
    lambda_recovered: float | None
    Gamma_recovered: float | None
    tolerance: float = CONSTRAINT_TOL

    @property
    def on_shell(self) -> bool:
        t = self.tolerance
        return abs(self.phi0) <= t and abs(self.phi1) <= t and abs(self.phi2) <= t


def constraints(
    state: PerturbationState, tau: float = 0.0, q_z: float | None = None, tol: float = CONSTRAINT_TOL
) -> ConstraintReport:
    """Evaluate ``Phi0``, ``Phi1 = p_z`` and ``Phi2 = q_z - R0 tau``.

    ``q_z`` defaults to the z-coordinate of :meth:`PerturbationState.center`.
    """
    j = evolve_modes(state.spectrum, tau)[-1]
    p = state.p_complex
    ph0 = phi0(p, j).imag
    if q_z is None:
        q_z = float(state.center(tau)[2])
    ph2 = q_z - state.constants.R0 * tau
    try:
        lam, gam = recover_circulation(p, j, state.constants, tol=max(tol, 1e-12))
    except (UndeterminedCirculation, NotOnConstraintSurface):
        lam = gam = None
    return ConstraintReport(float(ph0), float(state.p[2]), float(ph2), lam, gam, tol)


# --------------------------------------------------------------------------
# energy


def h0(state: PerturbationState) -> float:
    """``|p_perp|^2 / 2 m0 + E0 sum_{n>1} |j_{-n}|^2 n sqrt(n^2 - 1)``."""
    c = state.constants
    _, neg = state.spectrum.independent()
    n = np.arange(1, neg.size + 1)
    internal = np.sum(np.abs(neg[1:]) ** 2 * dispersion(n[1:])) if neg.size > 1 else 0.0
    return float(abs(state.p_complex) ** 2 / (2.0 * c.m0) + c.E0 * internal)


def hamiltonian(state: PerturbationState, ell: float = 0.0) -> complex | float:
    """``H = H0 + ell * Phi0``; real ``H0`` when ``ell == 0``."""
    h = h0(state)
    if ell == 0.0:
        return h
    return h + ell * phi0(state.p_complex, state.j_minus1)


# --------------------------------------------------------------------------
# Poisson brackets


def _fd_step(x: float, rel: float) -> float:
    return rel * max(1.0, abs(x))


@dataclass(frozen=True)
class _Gradient:
    dq: NDArray[np.complex128]
    dp: NDArray[np.complex128]
    dz: NDArray[np.complex128]  # d/d j_{-n}
    dzbar: NDArray[np.complex128]  # d/d conj j_{-n}


def _with_independent(state: PerturbationState, j0: float, neg: NDArray) -> PerturbationState:
    return state.replace(spectrum=ModeSpectrum.from_independent(j0, neg))


def gradient(obs: Observable, state: PerturbationState, rel_step: float = 1e-6) -> _Gradient:
    """Central-difference partial derivatives of ``obs`` in canonical coordinates.

    Coordinates are ``q0``, ``p`` and the complex ``j_{-n}``; derivatives
    in ``j_{-n}`` are Wirtinger derivatives. ``j_0`` is not a coordinate.
    """

    def central(make) -> complex:
        hi, lo, h = make()
        v = (complex(obs(hi)) - complex(obs(lo))) / (2.0 * h)
        if not np.isfinite(v):
            raise DomainError("non-finite finite-difference gradient")
        return v

    dq = np.zeros(3, dtype=np.complex128)
    dp = np.zeros(3, dtype=np.complex128)
    for i in range(3):
        for name, target in (("q0", dq), ("p", dp)):
            base = getattr(state, name)

            def make(base=base, name=name, i=i):
                h = _fd_step(base[i], rel_step)
                up, dn = base.copy(), base.copy()
                up[i] += h
                dn[i] -= h
                return state.replace(**{name: up}), state.replace(**{name: dn}), h

            target[i] = central(make)

    j0, neg = state.spectrum.independent()
    dz = np.zeros(neg.size, dtype=np.complex128)
    dzbar = np.zeros(neg.size, dtype=np.complex128)
    for k in range(neg.size):
        parts = []
        for unit in (1.0, 1j):

            def make(unit=unit, k=k):
                comp = neg[k].real if unit == 1.0 else neg[k].imag
                h = _fd_step(comp, rel_step)
                up, dn = neg.copy(), neg.copy()
                up[k] += unit * h
                dn[k] -= unit * h
                return _with_independent(state, j0, up), _with_independent(state, j0, dn), h

            parts.append(central(make))
        dx, dy = parts
        dz[k] = 0.5 * (dx - 1j * dy)
        dzbar[k] = 0.5 * (dx + 1j * dy)
    return _Gradient(dq, dp, dz, dzbar)


def poisson_bracket(
    a: Observable, b: Observable, state: PerturbationState, rel_step: float = 1e-6
) -> complex:
    """Numerical ``{A, B}`` at ``state`` from finite-difference gradients.

    ``{A,B} = sum_i (dA/dp_i dB/dq_i - dA/dq_i dB/dp_i)
    + (i/E0 t0) sum_n (dA/dj_{-n} dB/dconj(j_{-n}) - dA/dconj(j_{-n}) dB/dj_{-n})``.
    """
    ga = gradient(a, state, rel_step)
    gb = gradient(b, state, rel_step)
    c = state.constants
    mech = np.sum(ga.dp * gb.dq - ga.dq * gb.dp)
    modes = (1j / (c.E0 * c.t0)) * np.sum(ga.dz * gb.dzbar - ga.dzbar * gb.dz)
    return complex(mech + modes)


# --------------------------------------------------------------------------
# Hamilton equations


def field_value(xi: float) -> Observable:
    """Observable ``j(xi) = sum_n j_n e^{i n xi}`` of the current coefficients."""

    def obs(st: PerturbationState) -> complex:
        n = st.spectrum.indices
        return complex(np.sum(st.spectrum.coeff * np.exp(1j * n * xi)))

    return obs


def bracket_series(state: PerturbationState, tau: float, xi: float) -> complex:
    """``(i/t0) sum_{|n|>1} j_n n sqrt(n^2-1) e^{i[n xi + n sqrt(n^2-1) tau]}``."""
    n = state.spectrum.indices
    w = dispersion(n)
    keep = np.abs(n) > 1
    terms = state.spectrum.coeff * w * np.exp(1j * (n * xi + w * tau))
    return complex(1j / state.constants.t0 * np.sum(terms[keep]))


def time_derivative_fd(state: PerturbationState, tau: float, xi: float) -> complex:
    """``d j(tau, xi) / dt`` by a five-point stencil on the closed-form flow."""
    n = state.spectrum.indices
    w_max = float(np.max(np.abs(dispersion(n))))
    h = 1e-3 / max(1.0, w_max)
    f = field_value(xi)
    vals = [f(evolve_state(state, tau + s * h)) for s in (-2, -1, 1, 2)]
    d = (vals[0] - 8.0 * vals[1] + 8.0 * vals[2] - vals[3]) / (12.0 * h)
    return complex(d / state.constants.t0)


@dataclass(frozen=True)
class HamiltonReport:
    dq_dt_error: float
    dp_dt_error: float
    bracket_vs_series: float
    series_vs_fd: float
    points: NDArray[np.float64]
    tolerance: float

    @property
    def passed(self) -> bool:
        return max(self.dq_dt_error, self.dp_dt_error, self.bracket_vs_series, self.series_vs_fd) <= self.tolerance


def verify_hamilton_equations(
    state: PerturbationState,
    tau_probe: float = 0.0,
    n_points: int = 10,
    seed: int = 0,
    tol: float = 1e-6,
    strict: bool = True,
) -> HamiltonReport:
    """Check ``dq/dt = p/m0``, ``dp/dt = 0`` and the mode equation at ``tau_probe``.

    The bracket ``{H0, j(xi)}`` at the evolved state is compared with the
    explicit series and with a finite-difference time derivative of the
    closed-form flow at ``n_points`` random ``(tau, xi)`` points, where
    ``tau`` is drawn from ``[0, tau_probe]`` (``tau_probe`` itself when 0).
    Errors are measured relative to ``max(1, |series|)``.
    """
    c = state.constants
    st = evolve_state(state, tau_probe)
    dq = np.array([poisson_bracket(h0, lambda s, i=i: s.q0[i], st) for i in range(3)])
    dp = np.array([poisson_bracket(h0, lambda s, i=i: s.p[i], st) for i in range(3)])
    p_planar = np.array([state.p[0], state.p[1], 0.0])
    dq_err = float(np.max(np.abs(dq - p_planar / c.m0)) / max(1.0, np.max(np.abs(p_planar / c.m0))))
    dp_err = float(np.max(np.abs(dp)))

    rng = np.random.default_rng(seed)
    taus = rng.uniform(0.0, tau_probe, n_points) if tau_probe > 0 else np.zeros(n_points)
    xis = rng.uniform(0.0, 2.0 * np.pi, n_points)
    e_br = e_fd = 0.0
    for tau, xi in zip(taus, xis):
        series = bracket_series(state, tau, xi)
        scale = max(1.0, abs(series))
        br = poisson_bracket(h0, field_value(xi), evolve_state(state, tau))
        fd = time_derivative_fd(state, tau, xi)
        e_br = max(e_br, abs(br - series) / scale)
        e_fd = max(e_fd, abs(fd - series) / scale)
    report = HamiltonReport(dq_err, dp_err, e_br, e_fd, np.column_stack([taus, xis]), tol)
    if strict and not report.passed:
        raise HamiltonConsistencyError(
            f"Hamilton equations violated: dq {dq_err:.2e}, dp {dp_err:.2e}, "
            f"bracket {e_br:.2e}, fd {e_fd:.2e} (tol {tol:g})"
        )
    return report
