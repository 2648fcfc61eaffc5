"""Time-averaged concurrence across energy.

psi_x peaks at eps = 2/3 lambda_R then decays like 1/eps; the Bell states dip
to their minimum at eps = lambda_R and return to 2/pi.
"""

import math

import numpy as np

from dirac_entangle import AveragingSpec, ModelParams, make_propagator, named_state, time_averaged_concurrence

lam = 37.5
spec = AveragingSpec()
names = ("psi_x_up", "psi_y_up", "bell_1", "bell_2")

print(f"{'eps/lambda':>10} " + " ".join(f"{n:>9}" for n in names))
for ratio in [1e-3, 0.1, 0.5, 2 / 3, 1.0, 1.5, 3.0, 10.0, 100.0]:
    prop = make_propagator(ModelParams(ratio * lam, lam))
    vals = [time_averaged_concurrence(prop, named_state(n), spec) for n in names]
    print(f"{ratio:10.4g} " + " ".join(f"{v:9.4f}" for v in vals))

print("2/pi =", 2 / math.pi)
ratios = np.geomspace(0.3, 2, 61)
x_avg = [time_averaged_concurrence(make_propagator(ModelParams(r * lam, lam)), named_state("psi_x_up"), spec)
         for r in ratios]
print("argmax of <C_x> on a fine grid:", ratios[int(np.argmax(x_avg))])
