"""Concurrence of a few initial states as they evolve.

At the Dirac point the four named states oscillate at 4 lambda_R; at high
energy the kinetic term locks the pseudospin to x and the spin precesses at
2 lambda_R, so a Bell state is rectified cosine and psi_x barely entangles.
"""

import numpy as np

from dirac_entangle import ModelParams, TimeGrid, make_propagator, named_state, trajectory

lam = 37.5
grid = TimeGrid.rashba_periods(lam, periods=1, n_samples=9)
x = grid.times * lam

for ratio in (0.0, 1.0, 100.0):
    prop = make_propagator(ModelParams(ratio * lam, lam))
    print(f"\neps = {ratio:g} lambda_R;  t lambda_R/hbar = " + " ".join(f"{v:5.2f}" for v in x))
    for name in ("psi_x_up", "psi_y_up", "bell_1", "bell_2"):
        c = trajectory(prop, named_state(name), grid, ["C"])["C"]
        print(f"  {name:9s}" + " ".join(f"{v:5.2f}" for v in c))

print("\n|cos 4 lambda t| for comparison:", np.round(np.abs(np.cos(4 * x)), 2))
