"""
Constraints, energy and Poisson brackets
=========================================

A state is on the constraint surface when its transverse momentum is
parallel to j_-1. The ratio fixes the circulation. Brackets are taken
numerically, by finite differences in the canonical coordinates.
"""

import numpy as np

from vring.constants import UNIT
from vring.modes import random_spectrum
from vring.observables import (
    constraints,
    h0,
    on_shell_state,
    phi0,
    poisson_bracket,
    verify_hamilton_equations,
)
from vring.spectral import evolve_state

state = on_shell_state(random_spectrum(np.random.default_rng(3), 4), UNIT, lam=0.4)

# %%
rep = constraints(state)
print("Phi0, Phi1, Phi2 =", rep.phi0, rep.phi1, rep.phi2)
print("recovered lambda =", rep.lambda_recovered, " Gamma =", rep.Gamma_recovered)

# %%
# Energy and constraints are constant along the exact flow.
for tau in (0.0, 10.0, 100.0):
    later = evolve_state(state, tau)
    print(f"tau={tau:6.1f}  H0={h0(later):.12f}  Phi0={constraints(later).phi0:+.1e}")

# %%
# A few brackets.
px_qx = poisson_bracket(lambda s: s.p[0], lambda s: s.q0[0], state)
h_phi = poisson_bracket(h0, lambda s: phi0(s.p_complex, s.j_minus1), state)
print("{p_x, q_x} =", px_qx, "  {H0, Phi0} =", h_phi)

# %%
# The bracket with H0 generates the closed-form time derivative.
report = verify_hamilton_equations(state, tau_probe=3.0, n_points=10)
print(report.bracket_vs_series, report.series_vs_fd, report.passed)
