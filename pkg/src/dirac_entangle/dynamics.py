"""Time evolution under a fixed k-point Hamiltonian."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .entanglement import chsh_beta, concurrence
from .errors import ConfigError, NumericDomainError, UnsupportedBranchError
from .model import EigenSystem, ModelParams, build_hamiltonian, eigensystem
from .states import SpinorState, amplitudes_of, expectation_vectors


@dataclass(frozen=True)
class Propagator:
    """Spectral form of ``U(t) = sum_j exp(-i E_j t) P_j``.

    ``projectors`` holds one rank-1 projector per level; ``eigenspaces`` pairs
    each distinct energy with the projector onto its whole eigenspace, which
    is what evolution uses.
    """

    params: ModelParams
    eigensystem: EigenSystem = field(repr=False)
    projectors: tuple = field(repr=False)
    eigenspaces: tuple = field(repr=False)

    @property
    def energies(self):
        return np.array([e for e, _ in self.eigenspaces])

    @property
    def hamiltonian(self):
        return self.eigensystem.hamiltonian

    def slowest_frequency(self):
        """Smallest nonzero gap between distinct eigenvalues (rad per time unit)."""
        e = self.energies
        gaps = np.abs(np.subtract.outer(e, e))[np.triu_indices(len(e), 1)]
        return float(gaps.min()) if gaps.size else 0.0


def make_propagator(params: ModelParams) -> Propagator:
    es = eigensystem(params)
    projectors = tuple(np.outer(v, v.conj()) for v in es.vectors.T)
    spaces = tuple(es.eigenspaces())
    return Propagator(params, es, projectors, spaces)


def _components(p: Propagator, amps):
    """Projections of ``amps`` (..., 4) onto each eigenspace: (..., G, 4)."""
    return np.stack([amps @ proj.T for _, proj in p.eigenspaces], axis=-2)


def phase_factors(p: Propagator, times):
    times = np.asarray(times, dtype=float)
    return np.exp(-1j * np.multiply.outer(times, p.energies))


def evolve_amplitudes(p: Propagator, amps, times, phases=None):
    """Evolve amplitudes ``(..., 4)`` to every time in ``times`` (shape (n,)).

    Returns shape ``(..., n, 4)``. Each time is computed directly from the
    spectral form. ``phases`` may be passed to reuse ``phase_factors``.
    """
    amps = amplitudes_of(amps)
    comps = _components(p, amps)[..., None, :, :]  # (..., 1, G, 4)
    if phases is None:
        phases = phase_factors(p, times)
    out = phases[:, 0, None] * comps[..., 0, :]
    for g in range(1, phases.shape[1]):
        out = out + phases[:, g, None] * comps[..., g, :]
    return out


def evolve(p: Propagator, state, t: float) -> SpinorState:
    amps = evolve_amplitudes(p, state, np.array([float(t)]))[0]
    return SpinorState(amps, normalize=True)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid in ``hbar/ueV`` including both end points."""

    t_start: float
    t_end: float
    n_samples: int

    def __post_init__(self):
        if self.n_samples < 2:
            raise ConfigError("a time grid needs at least 2 samples")
        if not self.t_end > self.t_start:
            raise ConfigError("t_end must be greater than t_start")

    @property
    def spacing(self):
        return (self.t_end - self.t_start) / (self.n_samples - 1)

    @property
    def times(self):
        return np.linspace(self.t_start, self.t_end, self.n_samples)

    @classmethod
    def rashba_periods(cls, lambda_R, periods=4.0, n_samples=2001):
        """Grid over ``periods`` spin-pseudospin precession periods ``pi/lambda_R``."""
        return cls(0.0, periods * math.pi / lambda_R, n_samples)


@dataclass(frozen=True)
class TimeSeries:
    grid: TimeGrid
    channels: dict

    def __getitem__(self, name):
        return self.channels[name]


_BLOCH_CHANNELS = {
    "sx": ("spin", 0), "sy": ("spin", 1), "sz": ("spin", 2),
    "sigma_x": ("pseudo", 0), "sigma_y": ("pseudo", 1), "sigma_z": ("pseudo", 2),
}
CHANNELS = ("C", "beta", "norm", "energy") + tuple(_BLOCH_CHANNELS)


def trajectory(p: Propagator, state, grid: TimeGrid, channels=("C", "beta")) -> TimeSeries:
    unknown = [c for c in channels if c not in CHANNELS]
    if unknown:
        raise ConfigError(f"unknown channel(s) {unknown}; valid: {', '.join(CHANNELS)}")
    psi = evolve_amplitudes(p, state, grid.times)
    out = {}
    conc = concurrence(psi)
    if any(c in _BLOCH_CHANNELS for c in channels):
        spin, pseudo = expectation_vectors(psi)
    for name in channels:
        if name == "C":
            out[name] = conc
        elif name == "beta":
            out[name] = chsh_beta(conc)
        elif name == "norm":
            out[name] = np.linalg.norm(psi, axis=-1)
        elif name == "energy":
            out[name] = np.einsum("ti,ij,tj->t", psi.conj(), p.hamiltonian, psi).real
        else:
            which, k = _BLOCH_CHANNELS[name]
            out[name] = (spin if which == "spin" else pseudo)[:, k]
    return TimeSeries(grid, out)


MAX_ORACLE_STEPS = 10**9


def integrate_schrodinger_oracle(params: ModelParams, state, t: float, dt_max: float | None = None):
    """Classic fixed-step RK4 for ``i d psi/dt = H psi``; test oracle only.

    Uses no eigendecomposition. For this linear autonomous system the four
    RK4 stages compose into one step matrix ``1 + A + A^2/2 + A^3/6 + A^4/24``
    with ``A = -i H dt``, which is applied repeatedly. No renormalization.
    The default step is ``1e-3 / eps_plus`` (``eps_plus`` the largest level).
    """
    h = build_hamiltonian(params)
    psi = np.array(amplitudes_of(state), dtype=complex)
    t = float(t)
    if dt_max is None:
        dt_max = 1e-3 / params.band_energies[1]
    if t == 0.0:
        return psi
    steps = math.ceil(abs(t) / dt_max)
    if steps > MAX_ORACLE_STEPS:
        raise NumericDomainError(
            f"oracle would need {steps} steps (> {MAX_ORACLE_STEPS}); increase dt_max or shorten t"
        )
    dt = t / steps
    a = -1j * dt * h
    a2 = a @ a
    step = np.eye(4) + a + a2 / 2 + a2 @ a / 6 + a2 @ a2 / 24
    for _ in range(steps):
        psi = step @ psi
    return psi


@dataclass(frozen=True)
class EffectiveFields:
    B_spin: np.ndarray
    B_pseudospin: np.ndarray


def effective_fields(state, params: ModelParams) -> EffectiveFields:
    """Precession fields felt by spin and pseudospin for transport along x (ueV)."""
    if abs(params.theta) > 1e-12:
        raise UnsupportedBranchError("effective fields are defined for transport along x (theta = 0)")
    spin, pseudo = expectation_vectors(state)
    lam = params.lambda_R
    b_spin = lam * np.array([-pseudo[1], pseudo[0], 0.0])
    b_pseudo = lam * np.array([spin[1], -spin[0], 0.0]) + np.array([params.epsilon, 0.0, 0.0])
    return EffectiveFields(b_spin, b_pseudo)

