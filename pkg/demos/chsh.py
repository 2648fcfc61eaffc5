"""Bell-CHSH violation at 25 meV.

beta = sqrt(1 + C^2) exceeds the classical bound 1 whenever the state is
entangled. All three states repeat with the Rashba frequency.
"""

import math

from dirac_entangle import rectified_frequency
from dirac_entangle.experiments import RunConfig, cmd_chsh

table = cmd_chsh(RunConfig(command="chsh"))
x = table.column("t_over_hbar_lambdaR")
for label in ("bell_1", "haar", "separable"):
    beta = table.column(f"beta_{label}")
    w = rectified_frequency(x, beta)
    print(f"{label:10s} beta in [{beta.min():.4f}, {beta.max():.4f}], "
          f"mean violation {100 * (beta.mean() - 1):.1f}%, omega / omega_R = {w / 2:.4f}")
print("Tsirelson bound sqrt(2) =", math.sqrt(2))
