"""
Rebuilding the filament and computing its impulse
==================================================

The curve follows from the tangent field by a single integration. The
hydrodynamic impulse reduces to a double integral over the tangent, whose
transverse part at first order is 2 pi j_-1.
"""

import numpy as np

from vring._spectral import grid
from vring.constants import UNIT
from vring.geometry import reconstruct_curve
from vring.modes import ModeSpectrum
from vring.observables import impulse_double_integral, impulse_f, momentum
from vring.spectral import base_tangent, tangent_field
from vring.state import PerturbationState

# %%
# A ring with a tilt (mode -1) and an elliptical wobble (mode -2).
spec = ModeSpectrum.from_independent(0.0, [0.3j, 0.05])
state = PerturbationState(UNIT, spec, epsilon=0.05)
curve = reconstruct_curve(state, tau=0.0, n_grid=16)
print(curve.to_csv())
print("closed:", curve.closed, " gap:", curve.closure_gap)

# %%
# The unperturbed ring has impulse pi e_z.
print(impulse_double_integral(base_tangent(grid(64))))

# %%
# First-order transverse impulse: double integral, single integral and 2 pi j_-1.
imp = impulse_f(tangent_field(state, 0.0, 128).cartesian())
print(imp.f_perp, imp.f_perp_reduced, 2 * np.pi * spec[-1])

# %%
# Momentum at the unperturbed circulation.
mom = momentum(state)
print("p =", mom.p, " p_perp =", mom.p_perp)
