"""Random initial states keep substantial entanglement at every energy.

Haar-random states stay at 3 pi / 16 on average. Random product states get
entangled by the dynamics; how much depends on how their Bloch angles are
drawn, so both choices are shown.
"""

from dirac_entangle import AveragingSpec, ModelParams, ensemble_average

lam = 37.5
spec = AveragingSpec(n_samples=8192)
n, seed = 300, 1935

print(f"{'eps/lambda':>10} {'haar':>14} {'sep (sphere)':>14} {'sep (angles)':>14}")
for ratio in (0.0, 0.1, 1.0, 3.0, 10.0, 100.0):
    p = ModelParams(ratio * lam, lam)
    h = ensemble_average(p, "haar", n, spec, seed=seed)
    s = ensemble_average(p, "separable", n, spec, seed=seed, sampling="sphere")
    a = ensemble_average(p, "separable", n, spec, seed=seed, sampling="angles")
    print(f"{ratio:10g} " + " ".join(f"{x.mean:7.3f}+-{x.std_error:.3f}" for x in (h, s, a)))
