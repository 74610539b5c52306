"""
Coherent states, energy levels and the circulation amplitude
=============================================================

Mode 1 carries a coherent state fixed by the momentum constraint; higher
modes carry excitations. Overlaps between coherent states at different
circulations give an amplitude peaked at lambda0 = 1/pi.
"""

import numpy as np

from vring.constants import LAMBDA0
from vring.quantum import (
    QuantumState,
    annihilation_residual,
    circulation_density,
    energy_eigenvalue,
    fock_overlap_amplitude,
    matrix_hamiltonian_check,
    phi0_expectation,
    physical_amplitude,
)

p = 1.0 + 0.5j

# %%
state = QuantumState.coherent(p, excitations=(2, 3))
print("alpha =", state.alpha, " constraint residual =", annihilation_residual(state))
print("<Phi0> =", phi0_expectation(p))

# %%
# Energy levels: the closed form against a matrix Hamiltonian on a truncated Fock space.
for modes in [(), (2,), (2, 2), (2, 3)]:
    rep = matrix_hamiltonian_check(p, modes)
    print(modes, energy_eigenvalue(p, modes), rep.rayleigh, rep.residual)

# %%
# The amplitude closed form against the numerical overlap.
for lam in (0.1, 0.2, LAMBDA0, 1.0, 10.0):
    print(f"lambda={lam:.4f}  closed={physical_amplitude(p, lam).real:.10f}  overlap={fock_overlap_amplitude(p, lam).real:.10f}")

# %%
rows = circulation_density(p, (2,), np.sort(np.append(np.linspace(0.1, 1.0, 10), LAMBDA0)))
for lam, gamma, dens in rows:
    print(f"{lam:.4f}  {gamma:.4f}  {dens:.6f}")
