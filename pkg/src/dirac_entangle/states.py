"""Pure spin-pseudospin states: named states, product states, random ensembles."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass

import numpy as np

from .basis import PSEUDOSPIN_OPS, SPIN_OPS
from .errors import ConfigError, ParameterDomainError

log = logging.getLogger(__name__)

NORM_TOL = 1e-12


class SpinorState:
    """Normalized amplitudes ``(a, b, c, d)`` on ``{A up, B up, A down, B down}``.

    The amplitude array is read-only. No global phase convention is imposed.
    """

    __slots__ = ("_amps",)

    def __init__(self, amplitudes, normalize=False):
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (4,):
            raise ParameterDomainError(f"a spinor needs 4 amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if normalize:
            if norm == 0.0 or not np.isfinite(norm):
                raise ParameterDomainError("cannot normalize a zero or non-finite vector")
            amps = amps / norm
        elif abs(norm - 1.0) > NORM_TOL:
            raise ParameterDomainError(f"state is not normalized (|psi| = {norm!r})")
        amps.setflags(write=False)
        self._amps = amps

    @property
    def amplitudes(self):
        return self._amps

    def __array__(self, dtype=None, copy=None):
        return self._amps if dtype is None else self._amps.astype(dtype)

    def __iter__(self):
        return iter(self._amps)

    def __repr__(self):
        inner = ", ".join(f"{z.real:+.6g}{z.imag:+.6g}j" for z in self._amps)
        return f"SpinorState([{inner}])"

    def overlap(self, other):
        """Phase-insensitive fidelity amplitude ``|<self|other>|``."""
        return abs(np.vdot(self._amps, np.asarray(other)))


def amplitudes_of(state):
    """Amplitude array of a :class:`SpinorState` or any ``(..., 4)`` array."""
    if isinstance(state, SpinorState):
        return state.amplitudes
    return np.asarray(state, dtype=complex)


_R2 = 1.0 / math.sqrt(2.0)
NAMED_STATES = {
    "psi_x_up": (_R2, _R2, 0, 0),
    "psi_y_up": (_R2, 1j * _R2, 0, 0),
    "bell_1": (_R2, 0, 0, _R2),
    "bell_2": (0, _R2, _R2, 0),
}


def named_state(which: str) -> SpinorState:
    try:
        return SpinorState(NAMED_STATES[which])
    except KeyError:
        raise ConfigError(
            f"unknown state {which!r}; valid names: {', '.join(NAMED_STATES)}"
        ) from None


def parse_state(text: str) -> SpinorState:
    """Parse a state name or a JSON list of four ``[re, im]`` pairs."""
    text = text.strip()
    if not text.startswith("["):
        return named_state(text)
    try:
        pairs = json.loads(text)
        amps = np.array([complex(float(re), float(im)) for re, im in pairs])
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"state literal must be a JSON list of 4 [re, im] pairs: {text!r}") from exc
    if amps.shape != (4,):
        raise ConfigError(f"state literal needs exactly 4 amplitudes, got {amps.size}")
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise ConfigError("state literal is the zero vector")
    if abs(norm - 1.0) > 1e-6:
        log.warning("state literal has norm %.9g; normalizing", norm)
    return SpinorState(amps, normalize=True)


@dataclass(frozen=True)
class BlochAngles:
    """Polar/azimuthal angles for the pseudospin (``_p``) and spin (``_s``)."""

    theta_p: float
    phi_p: float
    theta_s: float
    phi_s: float

    def __post_init__(self):
        for name in ("theta_p", "theta_s"):
            v = getattr(self, name)
            if not 0.0 <= v <= math.pi:
                raise ParameterDomainError(f"{name} must lie in [0, pi], got {v!r}")
        for name in ("phi_p", "phi_s"):
            object.__setattr__(self, name, float(getattr(self, name)) % (2.0 * math.pi))


def bloch_spinor(theta, phi):
    return np.array([math.cos(theta / 2), math.sin(theta / 2) * complex(math.cos(phi), math.sin(phi))])


def product_state(angles: BlochAngles) -> SpinorState:
    pseudo = bloch_spinor(angles.theta_p, angles.phi_p)
    spin = bloch_spinor(angles.theta_s, angles.phi_s)
    # spin is the slow index
    return SpinorState(np.kron(spin, pseudo), normalize=True)


def member_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for ensemble member ``index`` of master ``seed``.

    Depends only on ``(seed, index)``, so any partition of the ensemble
    across workers reproduces the same states.
    """
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(index),)))


def random_haar_state(rng: np.random.Generator) -> SpinorState:
    """Normalized vector of i.i.d. standard complex Gaussians (Haar on CP^3)."""
    while True:
        z = rng.standard_normal(8)
        amps = z[:4] + 1j * z[4:]
        if np.any(amps != 0):
            return SpinorState(amps, normalize=True)


SEPARABLE_SAMPLINGS = ("sphere", "angles")


def random_separable_state(rng: np.random.Generator, sampling: str = "sphere") -> SpinorState:
    """Random product of a pseudospin and a spin Bloch spinor.

    ``sampling="angles"`` draws each polar angle uniformly in ``[0, pi]``;
    ``sampling="sphere"`` draws ``cos(theta)`` uniformly in ``[-1, 1]``
    (uniform on the Bloch sphere). Azimuths are uniform in ``[0, 2 pi)``
    either way. Draw order: theta_p, phi_p, theta_s, phi_s.
    """
    if sampling == "angles":
        u = rng.random(4)
        theta_p, theta_s = math.pi * u[0], math.pi * u[2]
    elif sampling == "sphere":
        u = rng.random(4)
        theta_p, theta_s = math.acos(1.0 - 2.0 * u[0]), math.acos(1.0 - 2.0 * u[2])
    else:
        raise ConfigError(f"unknown separable sampling {sampling!r}; choose from {SEPARABLE_SAMPLINGS}")
    angles = BlochAngles(theta_p, 2.0 * math.pi * u[1], theta_s, 2.0 * math.pi * u[3])
    return product_state(angles)


@dataclass(frozen=True)
class BlochVectors:
    spin: np.ndarray
    pseudospin: np.ndarray


def expectation_vectors(amps):
    """Spin and pseudospin expectation values for ``(..., 4)`` amplitudes.

    Returns two real arrays of shape ``(..., 3)``.
    """
    amps = amplitudes_of(amps)
    spin = np.stack([np.einsum("...i,ij,...j->...", amps.conj(), op, amps).real for op in SPIN_OPS], -1)
    pseudo = np.stack([np.einsum("...i,ij,...j->...", amps.conj(), op, amps).real for op in PSEUDOSPIN_OPS], -1)
    return spin, pseudo


def bloch_vectors(state) -> BlochVectors:
    spin, pseudo = expectation_vectors(state)
    return BlochVectors(spin=spin, pseudospin=pseudo)
