"""
Mode frequencies and the coupling between n and -n
===================================================

Each Fourier mode of the complex perturbation j = j_rho + i j_z rotates
with frequency omega(n) = n sqrt(n^2 - 1). Only half of the modes are free:
the coefficient of mode n is fixed by that of mode -n.
"""

import numpy as np

from vring.dispersion import coupling_coefficient, dispersion, dispersion_table
from vring.modes import ModeSpectrum, coupling_residual, enforce_coupling

# %%
# The table for the first few modes. Modes 0 and +-1 do not move.
for n, w, c in dispersion_table(6):
    print(f"n={int(n):2d}  omega={w:10.6f}  c(n)={c:+.7f}")

# %%
# For large n the frequency approaches n^2 - 1/2 and |c(n)| shrinks like 1/(4 n^2).
n = np.array([10, 100, 1000])
print(dispersion(n) - (n**2 - 0.5))
print(coupling_coefficient(n) * 4 * n**2)

# %%
# Pick the free coefficients (j_0 real, j_-1, j_-2) and let the coupling fill in the rest.
free = ModeSpectrum.from_dict({0: 0.2, -1: 0.5j, -2: 0.1})
spec = enforce_coupling(free)
for k in spec.indices:
    print(k, np.round(spec[k], 6))
print("coupling residual:", coupling_residual(spec))
