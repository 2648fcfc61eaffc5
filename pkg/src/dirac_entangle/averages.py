"""Long-time and ensemble averages of the concurrence.

The dynamics are quasi-periodic with generally incommensurate frequencies,
so time averages are uniform-sample means over a long horizon rather than
over an exact period.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import Propagator, make_propagator
from .entanglement import concurrence
from .errors import ConfigError, ParameterDomainError
from .model import ModelParams
from .states import amplitudes_of, member_rng, random_haar_state, random_separable_state

#: Ensemble members evaluated together; fixed so results never depend on threading.
CHUNK = 32

ENSEMBLES = ("haar", "separable")


@dataclass(frozen=True)
class AveragingSpec:
    """Sampling plan for a time average.

    ``horizon`` is in units of ``hbar/lambda_R``. The horizon actually used
    is stretched when needed to cover ``min_slow_periods`` periods of the
    slowest beat frequency (which becomes very slow near ``epsilon = 0``).
    """

    horizon: float = 200 * math.pi
    n_samples: int = 32768
    min_slow_periods: float = 50.0

    def __post_init__(self):
        if not self.horizon > 0:
            raise ParameterDomainError("averaging horizon must be positive")
        if self.n_samples < 4096:
            raise ParameterDomainError(f"need at least 4096 time samples, got {self.n_samples}")

    def times(self, p: Propagator):
        """Sample times ``k * T / n`` for ``k < n`` in ``hbar/ueV``."""
        horizon = self.horizon / p.params.lambda_R
        slow = p.slowest_frequency()
        if slow > 0:
            horizon = max(horizon, self.min_slow_periods * 2 * math.pi / slow)
        return np.arange(self.n_samples) * (horizon / self.n_samples)


def _pair_phases(p: Propagator, times):
    """``exp(-i (E_g + E_h) t)`` for eigenspace pairs ``g <= h``: shape (n, pairs)."""
    e = p.energies
    g, h = np.triu_indices(len(e))
    return np.exp(-1j * np.multiply.outer(times, e[g] + e[h])), (g, h)


def _batch_average(p, amps, pair_phases):
    """Mean over time of ``2|a d - b c|`` for a block of initial states.

    ``a d - b c`` of the evolved state is a bilinear form in the eigenspace
    components ``u_g``, so it is summed directly over eigenspace pairs.
    """
    phases, (gi, hi) = pair_phases
    u = np.stack([amps @ proj.T for _, proj in p.eigenspaces], axis=1)  # (m, G, 4)
    cross = u[:, :, None, 0] * u[:, None, :, 3] - u[:, :, None, 1] * u[:, None, :, 2]
    sym = cross + np.swapaxes(cross, 1, 2)
    weights = np.where(gi == hi, 0.5, 1.0) * sym[:, gi, hi]  # (m, pairs)
    det = weights[:, None, 0] * phases[None, :, 0]
    for k in range(1, phases.shape[1]):
        det = det + weights[:, None, k] * phases[None, :, k]
    return np.minimum(2.0 * np.abs(det), 1.0).mean(axis=-1)


def time_averaged_concurrences(p: Propagator, amps, spec: AveragingSpec = AveragingSpec(), threads: int = 1):
    """Time-averaged concurrence for each row of ``amps`` (shape (m, 4))."""
    amps = np.atleast_2d(amplitudes_of(amps))
    phases = _pair_phases(p, spec.times(p))
    chunks = [amps[i:i + CHUNK] for i in range(0, len(amps), CHUNK)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _batch_average(p, c, phases), chunks))
    else:
        parts = [_batch_average(p, c, phases) for c in chunks]
    return np.concatenate(parts)


def time_averaged_concurrence(p: Propagator, state, spec: AveragingSpec = AveragingSpec()) -> float:
    return float(time_averaged_concurrences(p, state, spec)[0])


@dataclass(frozen=True)
class EnsembleStats:
    mean: float
    std_error: float
    n: int
    label: str

    @classmethod
    def from_values(cls, values, label):
        values = np.asarray(values, dtype=float)
        n = values.size
        err = float(values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(float(values.mean()), err, n, label)


def ensemble_states(ensemble: str, n: int, seed: int, sampling: str = "sphere"):
    """``(n, 4)`` amplitudes; member ``k`` depends only on ``(seed, k)``."""
    if ensemble == "haar":
        draw = random_haar_state
    elif ensemble == "separable":
        def draw(rng):
            return random_separable_state(rng, sampling)
    else:
        raise ConfigError(f"unknown ensemble {ensemble!r}; choose from {ENSEMBLES}")
    if n < 1:
        raise ConfigError("ensemble size must be at least 1")
    return np.stack([draw(member_rng(seed, k)).amplitudes for k in range(n)])


def ensemble_average(
    params: ModelParams,
    ensemble: str,
    n: int,
    spec: AveragingSpec = AveragingSpec(),
    seed: int = 0,
    threads: int = 1,
    sampling: str = "sphere",
    states=None,
) -> EnsembleStats:
    """Mean and standard error of the time-averaged concurrence over an ensemble.

    Pass ``states`` (from :func:`ensemble_states`) to reuse one draw across
    several energies.
    """
    if states is None:
        states = ensemble_states(ensemble, n, seed, sampling)
    values = time_averaged_concurrences(make_propagator(params), states, spec, threads=threads)
    return EnsembleStats.from_values(values, ensemble)


def initial_concurrence_stats(ensemble, n, seed, sampling="sphere") -> EnsembleStats:
    """Ensemble statistics of the concurrence at ``t = 0``."""
    return EnsembleStats.from_values(
        concurrence(ensemble_states(ensemble, n, seed, sampling)), f"{ensemble}_t0"
    )


def rectified_frequency(times, signal, hysteresis=0.1):
    """Angular frequency of a rectified oscillation such as ``|cos(w t)|``.

    Upward crossings of the signal through its mean are located by linear
    interpolation; a crossing only counts after the signal has dipped below
    ``-hysteresis`` and risen above ``+hysteresis`` times its half range, so
    small ripples do not register. With ``T`` the mean spacing between
    counted crossings the result is ``pi / T``: ``|cos(w t)|``,
    ``cos(w t)**2`` and ``sqrt(1 + cos(w t)**2)`` all report ``w``.
    """
    t = np.asarray(times, dtype=float)
    x = np.asarray(signal, dtype=float)
    x = x - x.mean()
    band = hysteresis * 0.5 * (x.max() - x.min())
    zone = np.where(x >= band, 1, np.where(x <= -band, -1, 0))
    marked = np.nonzero(zone)[0]
    z = zone[marked]
    arm = marked[1:][(z[:-1] == -1) & (z[1:] == 1)]  # first high sample after a low one
    if arm.size < 2:
        raise ValueError("need at least two upward mean crossings to estimate a period")
    ups = np.nonzero((x[:-1] < 0) & (x[1:] >= 0))[0]
    idx = ups[np.searchsorted(ups, arm, side="right") - 1]
    crossings = t[idx] - x[idx] * (t[idx + 1] - t[idx]) / (x[idx + 1] - x[idx])
    period = (crossings[-1] - crossings[0]) / (idx.size - 1)
    return math.pi / period
