"""Independent routes to the same numbers.

Closed-form eigenvectors against a Jacobi diagonalization, spectral
propagation against a plain RK4 integration, and the 2|ad - bc| formula
against the purity of the reduced spin state.
"""

import numpy as np

from dirac_entangle import (
    ModelParams,
    analytic_eigensystem,
    build_hamiltonian,
    concurrence,
    concurrence_oracle,
    evolve,
    integrate_schrodinger_oracle,
    make_propagator,
    named_state,
    numeric_eigensystem,
)

p = ModelParams(epsilon=50.0, lambda_R=37.5, theta=0.7)
a = analytic_eigensystem(p)
n = numeric_eigensystem(build_hamiltonian(p))
print("energies (closed form):", np.round(a.energies, 6))
print("energies (Jacobi):     ", np.round(n.energies, 6))

state = named_state("psi_y_up")
t = 0.2
u = evolve(make_propagator(p), state, t).amplitudes
v = integrate_schrodinger_oracle(p, state, t)
print("1 - |<spectral|rk4>| =", 1 - abs(np.vdot(u, v)))

print("concurrence:", concurrence(u), "purity route:", concurrence_oracle(u))
