"""Entanglement of the band eigenstates as energy moves away from the Dirac point.

Close to eps = 0 the Rashba term dominates and every eigenstate is a Bell
pair. Far away the kinetic term wins, the states factorize, and the spin and
pseudospin Bloch vectors grow back to unit length.
"""

import numpy as np

from dirac_entangle import ModelParams, analytic_eigensystem, bloch_vectors, concurrence

lam = 37.5  # ueV

print(f"{'eps (ueV)':>10} {'C':>8} {'|s|':>8} {'|sigma|':>8}")
for eps in [0.0, 10.0, 37.5, 100.0, 300.0, 3000.0]:
    state = analytic_eigensystem(ModelParams(eps, lam)).by_label("e+").state
    v = bloch_vectors(state)
    print(f"{eps:10.1f} {concurrence(state):8.5f} {np.linalg.norm(v.spin):8.5f} "
          f"{np.linalg.norm(v.pseudospin):8.5f}")

# C^2 + |s|^2 = 1 holds for any pure two-qubit state
print("C = lambda / sqrt(eps^2 + lambda^2) at 300 ueV:", lam / np.hypot(300.0, lam))
