"""
The line-integral energy needs a cutoff
========================================

Excluding filament points closer than an angle delta gives a finite
energy, which grows like (Gamma^2 R0 / 2) ln(1/delta) as delta shrinks.
"""

import numpy as np

from vring.constants import UNIT
from vring.energy import circle_energy_exact, energy_divergence_table
from vring.geometry import reconstruct_curve
from vring.modes import ModeSpectrum
from vring.state import PerturbationState

curve = reconstruct_curve(PerturbationState(UNIT, ModeSpectrum.zeros(1), epsilon=0.0), 0.0, 1024)
deltas = 0.2 * 0.5 ** np.arange(5)
rows = energy_divergence_table(curve, 1.0, deltas)

# %%
for (d, e), (d2, e2) in zip(rows[:-1], rows[1:]):
    print(f"delta={d:.4f}  E={e:.6f}  exact={circle_energy_exact(1, 1, d):.6f}  slope={(e2 - e) / np.log(2):.4f}")
print("asymptotic slope: 0.5")
