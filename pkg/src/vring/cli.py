"""Command-line front end: ``vring <command> [options]``.

Exit status is 0 on success, 1 when a validation check fails and 2 on
usage errors, including malformed state files.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

import numpy as np

from . import __version__
from ._spectral import grid
from .constants import LAMBDA0, PhysicalConstants
from .dispersion import coupling_coefficient, dispersion, dispersion_table, inverse_coupling
from .energy import canonical_energy_cutoff, circle_energy_exact, energy_divergence_table
from .errors import ConsistencyError, IntegrationError, StepSizeError, VringError
from .geometry import check_closure, reconstruct_curve, unit_tangent
from .integrator import integrate
from .modes import ModeSpectrum, coupling_residual, random_spectrum
from .observables import (
    constraints,
    h0,
    impulse_double_integral,
    impulse_f,
    momentum,
    on_shell_state,
    poisson_bracket,
    verify_hamilton_equations,
)
from .output import csv_text, json_text, write_atomic
from .quantum import (
    QuantumState,
    annihilation_residual,
    circulation_density,
    energy_eigenvalue,
    fock_overlap_amplitude,
    matrix_hamiltonian_check,
    phi0_expectation,
    physical_amplitude,
)
from .spectral import base_tangent, evolve_state, tangent_field
from .state import PerturbationState, StateFormatError, load_state

__all__ = ["build_parser", "run", "main", "demo_state"]

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def demo_state(constants: PhysicalConstants | None = None) -> PerturbationState:
    """Ring with a single ``j_{-2} = 1`` mode at ``epsilon = 1e-2``."""
    c = constants or PhysicalConstants(1.0, 1.0, 1.0, 1.0)
    spec = ModeSpectrum.from_independent(0.0, [0.0, 1.0])
    return PerturbationState(c, spec, epsilon=1e-2)


def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")


def _modes_arg(text: str) -> tuple[int, ...]:
    if not text.strip():
        return ()
    try:
        ex = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(n < 2 for n in ex):
        raise argparse.ArgumentTypeError("excited modes must have n >= 2")
    return ex


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x > 0 or not np.isfinite(x):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return x


def _nonneg_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if x < 0 or not np.isfinite(x):
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return x


def _int_at_least(lo: int) -> Callable[[str], int]:
    def parse(text: str) -> int:
        try:
            n = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if n < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}: {text!r}")
        return n

    return parse


def _existing_file(text: str) -> Path:
    path = Path(text)
    if not path.is_file():
        raise argparse.ArgumentTypeError(f"no such file: {text}")
    return path


def _add_constants(p: argparse.ArgumentParser) -> None:
    for name in ("R0", "t0", "m0", "hbar"):
        p.add_argument(f"--{name}", type=_positive_float, default=1.0, help=f"{name} (default 1)")


def _constants(args: argparse.Namespace) -> PhysicalConstants:
    return PhysicalConstants(args.R0, args.t0, args.m0, args.hbar)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vring", description="Perturbed vortex ring toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-o", "--output", type=Path, help="write here instead of stdout")
        return p

    p = command("dispersion", "table of omega(n) and the mode coupling c(n)")
    p.add_argument("--n-max", type=_int_at_least(0), default=8)

    p = command("evolve", "time series of the perturbation field")
    p.add_argument("--mode", choices=("linear", "nonlinear", "closed-form"), default="linear")
    p.add_argument("--state", type=_existing_file, help="state JSON (default: j_-2 = 1 demo)")
    p.add_argument("--tau-end", type=_nonneg_float, default=1.0)
    p.add_argument("--dt", type=_positive_float, default=1e-3)
    p.add_argument("--n-grid", type=_int_at_least(8), default=128)
    p.add_argument("--snapshots", type=_int_at_least(2), default=11, help="output times incl. both ends")

    p = command("observables", "impulse, momentum, circulation, constraints and energy of a state")
    p.add_argument("--state", type=_existing_file)
    p.add_argument("--n-grid", type=_int_at_least(8), default=256)

    p = command("curve", "reconstruct the filament curve of a state")
    p.add_argument("--state", type=_existing_file)
    p.add_argument("--tau", type=_nonneg_float, default=0.0)
    p.add_argument("--n-grid", type=_int_at_least(8), default=256)
    p.add_argument(
        "--no-ring-drift",
        action="store_true",
        help="centre the curve at q0 + tau t0 p / m0, without the R0 tau e_z self-propulsion",
    )

    p = command("spectrum", "energy eigenvalue of a quantum state")
    p.add_argument("--p", type=_complex_arg, default=0j, help="transverse momentum re,im")
    p.add_argument("--modes", type=_modes_arg, default=(), help="excited modes, e.g. 2,2,3")
    _add_constants(p)

    p = command("circulation-density", "|amplitude|^2 over a lambda grid")
    p.add_argument("--p", type=_complex_arg, default=complex(1.0, 0.0))
    p.add_argument("--modes", type=_modes_arg, default=())
    p.add_argument("--lambda-min", type=float, default=0.1)
    p.add_argument("--lambda-max", type=float, default=1.0)
    p.add_argument("--steps", type=_int_at_least(2), default=91)
    _add_constants(p)

    p = command("energy-divergence", "cut-off energy E(delta) under repeated halving of delta")
    p.add_argument("--state", type=_existing_file, help="state JSON (default: unperturbed ring)")
    p.add_argument("--lambda", dest="lam", type=float, default=LAMBDA0, help="circulation lambda")
    p.add_argument("--delta-max", type=_positive_float, default=0.2)
    p.add_argument("--halvings", type=_int_at_least(0), default=4)
    p.add_argument("--n-grid", type=_int_at_least(8), default=1024)

    p = command("validate", "check a state, or run the built-in invariant suite")
    p.add_argument("--state", type=_existing_file)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=_positive_float, default=1e-10, help="constraint tolerance")
    return parser


# --------------------------------------------------------------------------
# commands; each returns (text, exit code)


def _state(args: argparse.Namespace, default: Callable[[], PerturbationState] = demo_state) -> PerturbationState:
    return load_state(args.state) if args.state is not None else default()


def _cmd_dispersion(args: argparse.Namespace) -> tuple[str, int]:
    return csv_text(("n", "omega", "coupling"), dispersion_table(args.n_max).tolist()), EXIT_OK


def _snapshot_indices(tau_end: float, dt: float, snapshots: int) -> tuple[int, int]:
    n_steps = int(round(tau_end / dt))
    if abs(n_steps * dt - tau_end) > 1e-9 * max(1.0, tau_end):
        raise UsageError(f"--dt {dt:g} does not divide --tau-end {tau_end:g}")
    if n_steps == 0:
        raise UsageError("--tau-end must be at least one step")
    if n_steps % (snapshots - 1):
        raise UsageError(f"{snapshots - 1} intervals do not divide {n_steps} steps")
    return n_steps, n_steps // (snapshots - 1)


def _cmd_evolve(args: argparse.Namespace) -> tuple[str, int]:
    state = _state(args)
    n = args.n_grid
    if n % 2 or n < 2 * state.n_max + 2:
        raise UsageError(f"--n-grid must be even and at least {2 * state.n_max + 2}")
    n_steps, stride = _snapshot_indices(args.tau_end, args.dt, args.snapshots)
    xi = grid(n)
    rows: list[list[float]] = []
    if args.mode == "nonlinear":
        traj = integrate(unit_tangent(state, 0.0, n), args.tau_end, args.dt, "nonlinear", stride)
        for t, f in zip(traj.times, traj.fields):
            rows.extend([t, x, *v] for x, v in zip(xi, f))
        return csv_text(("tau", "xi", "jx", "jy", "jz"), rows), EXIT_OK
    if args.mode == "linear":
        initial = tangent_field(state, 0.0, n).complex_field
        traj = integrate(initial, args.tau_end, args.dt, "linear", stride)
        series = zip(traj.times, traj.fields)
    else:
        times = [i * args.dt for i in range(0, n_steps + 1, stride)]
        series = ((t, tangent_field(state, t, n).complex_field) for t in times)
    for t, f in series:
        rows.extend([t, x, z.real, z.imag] for x, z in zip(xi, f))
    return csv_text(("tau", "xi", "re", "im"), rows), EXIT_OK


def _cmd_observables(args: argparse.Namespace) -> tuple[str, int]:
    state = _state(args)
    c = state.constants
    rep = constraints(state)
    lam = rep.lambda_recovered if rep.lambda_recovered is not None else c.lambda0
    mom = momentum(state, c.gamma_from_lambda(lam), args.n_grid)
    report = {
        "f": [float(x) for x in mom.f],
        "p": [float(x) for x in state.p],
        "lambda": lam,
        "Gamma": c.gamma_from_lambda(lam),
        "lambda_recovered": rep.lambda_recovered is not None,
        "phi0": rep.phi0,
        "phi1": rep.phi1,
        "phi2": rep.phi2,
        "H0": h0(state),
    }
    return json_text(report), EXIT_OK


def _cmd_curve(args: argparse.Namespace) -> tuple[str, int]:
    state = _state(args)
    curve = reconstruct_curve(state, args.tau, args.n_grid, ring_drift=not args.no_ring_drift)
    return curve.to_csv(), EXIT_OK


def _cmd_spectrum(args: argparse.Namespace) -> tuple[str, int]:
    c = _constants(args)
    kinetic = abs(args.p) ** 2 / (2.0 * c.m0)
    terms = [
        {"n": n, "omega": float(dispersion(n)), "energy": c.hbar / c.t0 * float(dispersion(n))}
        for n in args.modes
    ]
    report = {
        "energy": energy_eigenvalue(args.p, args.modes, c),
        "terms": {"kinetic": kinetic, "modes": terms},
    }
    return json_text(report), EXIT_OK


def _cmd_circulation_density(args: argparse.Namespace) -> tuple[str, int]:
    if args.lambda_max <= args.lambda_min:
        raise UsageError("--lambda-max must exceed --lambda-min")
    lam = np.linspace(args.lambda_min, args.lambda_max, args.steps)
    rows = circulation_density(args.p, args.modes, lam, _constants(args))
    return csv_text(("lambda", "Gamma", "density"), rows.tolist()), EXIT_OK


def _cmd_energy_divergence(args: argparse.Namespace) -> tuple[str, int]:
    if args.state is not None:
        state = load_state(args.state)
    else:
        state = demo_state().replace(epsilon=0.0)
    c = state.constants
    curve = reconstruct_curve(state, 0.0, args.n_grid)
    deltas = args.delta_max * 0.5 ** np.arange(args.halvings + 1)
    rows = energy_divergence_table(curve, c.gamma_from_lambda(args.lam), deltas)
    return csv_text(("delta", "E"), rows.tolist()), EXIT_OK


# --------------------------------------------------------------------------
# validation


Check = tuple[str, float, float]


def _state_checks(state: PerturbationState, tol: float) -> list[Check]:
    rep = constraints(state, tol=tol)
    d = tangent_field(state, 0.0, 256).cartesian()
    closure = check_closure(base_tangent(grid(256)) + state.epsilon * d)
    gap = float(np.max(np.abs(closure.cartesian)))
    try:
        imp = impulse_f(d)
        imp_err = abs(imp.f_perp - imp.f_perp_reduced)
    except ConsistencyError:
        imp_err = float("inf")
    return [
        ("coupling", coupling_residual(state.spectrum), 1e-12),
        ("closure", gap, closure.tolerance),
        ("impulse_reduction", imp_err, 1e-8),
        ("phi0", abs(rep.phi0), tol),
        ("phi1", abs(rep.phi1), tol),
        ("phi2", abs(rep.phi2), tol),
    ]


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _suite_checks(seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks: list[Check] = []
    n = np.arange(2, 65)
    omega = np.asarray(dispersion(n))
    checks.append(("dispersion_direct", float(np.max(np.abs(omega / (n * np.sqrt(n * n - 1.0)) - 1))), 1e-13))
    cc = np.asarray(coupling_coefficient(n)) * np.asarray(inverse_coupling(n))
    checks.append(("coupling_inverse", float(np.max(np.abs(cc - 1))), 1e-13))
    checks.append(("coupling_c1", abs(float(coupling_coefficient(1)) + 1.0), 0.0))

    spec = random_spectrum(rng, 4)
    unit = PhysicalConstants(1.0, 1.0, 1.0, 1.0)
    state = on_shell_state(spec, unit, epsilon=1e-2)
    checks.append(("coupling_random", coupling_residual(spec), 1e-12))
    d = tangent_field(state, 0.0, 64).cartesian()
    checks.append(("closure_random", float(np.max(np.abs(check_closure(d).cartesian))), 1e-10))
    checks.append(("impulse_j0", float(np.max(np.abs(impulse_double_integral(base_tangent(grid(64))) - [0, 0, np.pi]))), 1e-8))
    imp = impulse_f(d)
    checks.append(("impulse_f_perp", abs(imp.f_perp - 2 * np.pi * spec[-1]), 1e-8))

    traj = integrate(tangent_field(state, 0.0, 64).complex_field, 1.0, 1e-3, "linear", 1000)
    exact = tangent_field(state, 1.0, 64).complex_field
    checks.append(("oracle_equivalence", float(np.max(np.abs(traj.fields[-1] - exact))), 1e-6))

    ref = (h0(state), constraints(state))
    drift = 0.0
    for tau in (1.0, 10.0, 100.0):
        later = evolve_state(state, tau)
        rep = constraints(later)
        drift = max(drift, abs(h0(later) - ref[0]), abs(rep.phi0), abs(rep.phi1))
        drift = max(drift, float(np.max(np.abs(np.abs(later.spectrum.coeff) - np.abs(spec.coeff)))))
    checks.append(("conservation", drift, 1e-10))

    hrep = verify_hamilton_equations(state, n_points=4, seed=seed, strict=False)
    checks.append(("hamilton_bracket", max(hrep.bracket_vs_series, hrep.series_vs_fd), 1e-6))
    pq = poisson_bracket(lambda s: s.p[0], lambda s: s.q0[0], state)
    checks.append(("bracket_p_q", abs(pq - 1.0), 1e-8))

    curve = reconstruct_curve(state.replace(epsilon=0.0), 0.0, 512)
    e = canonical_energy_cutoff(curve, unit.Gamma0, 0.05)
    checks.append(("energy_circle", _rel(e, circle_energy_exact(1.0, unit.Gamma0, 0.05)), 1e-8))

    qs = QuantumState.coherent(1.5 - 0.5j)
    checks.append(("quantum_annihilation", annihilation_residual(qs), 1e-8))
    checks.append(("quantum_amplitude", abs(physical_amplitude(1.0, 0.5) - fock_overlap_amplitude(1.0, 0.5)), 1e-6))
    checks.append(("quantum_phi0", abs(phi0_expectation(1.5 - 0.5j)), 1e-10))
    checks.append(("quantum_matrix", matrix_hamiltonian_check(1.0 + 0.5j, (2, 3)).residual, 1e-8))
    dens = circulation_density(1.0, (), [LAMBDA0 * 0.9, LAMBDA0, LAMBDA0 * 1.1])
    checks.append(("density_peak", float(np.argmax(dens[:, 2]) != 1), 0.0))
    return checks


def _cmd_validate(args: argparse.Namespace) -> tuple[str, int]:
    if args.state is not None:
        checks = _state_checks(load_state(args.state), args.tol)
    else:
        checks = _suite_checks(args.seed)
    lines = []
    failed = []
    for name, value, tol in checks:
        ok = bool(value <= tol)
        lines.append(f"{'PASS' if ok else 'FAIL'} {name} value={value:.3e} tol={tol:.1e}")
        if not ok:
            failed.append(name)
    for name in failed:
        print(f"vring validate: invariant '{name}' violated", file=sys.stderr)
    return "\n".join(lines) + "\n", EXIT_VALIDATION if failed else EXIT_OK


_COMMANDS: dict[str, Callable[[argparse.Namespace], tuple[str, int]]] = {
    "dispersion": _cmd_dispersion,
    "evolve": _cmd_evolve,
    "observables": _cmd_observables,
    "curve": _cmd_curve,
    "spectrum": _cmd_spectrum,
    "circulation-density": _cmd_circulation_density,
    "energy-divergence": _cmd_energy_divergence,
    "validate": _cmd_validate,
}


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the command and return the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        text, code = _COMMANDS[args.command](args)
    except StateFormatError as exc:
        print(f"vring {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"vring {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConsistencyError, IntegrationError, StepSizeError) as exc:
        print(f"vring {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (VringError, OSError) as exc:
        print(f"vring {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output is None:
        sys.stdout.write(text)
    else:
        write_atomic(args.output, text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
