"""Graphene-Rashba Hamiltonian at a single k-point and its eigensystem.

Energies are in micro-electronvolts and hbar = 1, so times are measured in
``hbar / ueV`` (see :data:`HBAR_UEV_S`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import PAULI_0, PAULI_X, PAULI_Y, two_qubit
from .errors import NumericDomainError, ParameterDomainError, UnsupportedBranchError
from .jacobi import jacobi_eigh
from .states import SpinorState

#: Reduced Planck constant in ueV * s (CODATA 2018).
HBAR_UEV_S = 6.582119569e-10
#: One internal time unit, hbar / ueV, expressed in nanoseconds.
TIME_UNIT_NS = HBAR_UEV_S * 1e9

#: Below this kinetic energy (ueV) the charge-neutrality closed forms are used.
CNP_THRESHOLD = 1e-9

LEVEL_LABELS = ("h+", "h-", "e-", "e+")

_SIGMA_X_S0 = two_qubit(PAULI_X, PAULI_0)
_SIGMA_Y_S0 = two_qubit(PAULI_Y, PAULI_0)
_RASHBA_TAU = two_qubit(PAULI_X, PAULI_Y)
_RASHBA_FIXED = two_qubit(PAULI_Y, PAULI_X)


def _wrap_angle(theta):
    wrapped = (theta + math.pi) % (2.0 * math.pi) - math.pi
    # float rounding can land exactly on +pi
    return -math.pi if wrapped >= math.pi else wrapped


@dataclass(frozen=True)
class ModelParams:
    """One k-point of the continuum model.

    ``epsilon`` is the kinetic energy hbar*v_F*|k| and ``theta`` the momentum
    direction; both Rashba strength and energy are in ueV.
    """

    epsilon: float
    lambda_R: float
    theta: float = 0.0
    tau: int = 1

    def __post_init__(self):
        eps, lam, theta = float(self.epsilon), float(self.lambda_R), float(self.theta)
        if not math.isfinite(eps) or eps < 0.0:
            raise ParameterDomainError(f"epsilon must be a finite non-negative energy, got {self.epsilon!r}")
        if not math.isfinite(lam) or lam <= 0.0:
            raise ParameterDomainError(f"lambda_R must be positive, got {self.lambda_R!r}")
        if self.tau not in (1, -1):
            raise ParameterDomainError(f"valley index tau must be +1 or -1, got {self.tau!r}")
        if not math.isfinite(theta):
            raise ParameterDomainError(f"theta must be finite, got {self.theta!r}")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "lambda_R", lam)
        object.__setattr__(self, "theta", _wrap_angle(theta))
        object.__setattr__(self, "tau", int(self.tau))

    @property
    def band_energies(self):
        """``(eps_minus, eps_plus)`` with eps_pm = sqrt(eps^2 + lambda_R^2) +- lambda_R."""
        root = math.hypot(self.epsilon, self.lambda_R)
        # eps_minus written without cancellation
        eps_minus = self.epsilon**2 / (root + self.lambda_R)
        return eps_minus, root + self.lambda_R


def kpoint_from_cartesian(v_F, k_x, k_y, lambda_R, tau=1):
    """Build :class:`ModelParams` from a Fermi velocity (m/s) and wavevector (1/m)."""
    if not v_F > 0:
        raise ParameterDomainError(f"Fermi velocity must be positive, got {v_F!r}")
    eps = HBAR_UEV_S * v_F * math.hypot(k_x, k_y)
    return ModelParams(epsilon=eps, lambda_R=lambda_R, theta=math.atan2(k_y, k_x), tau=tau)


def build_hamiltonian(params: ModelParams) -> np.ndarray:
    """4x4 Hamiltonian in the ``{A up, B up, A down, B down}`` basis (ueV)."""
    eps, lam, tau = params.epsilon, params.lambda_R, params.tau
    kinetic = eps * (tau * math.cos(params.theta) * _SIGMA_X_S0 + math.sin(params.theta) * _SIGMA_Y_S0)
    h = kinetic + lam * (tau * _RASHBA_TAU - _RASHBA_FIXED)
    h = 0.5 * (h + h.conj().T)
    h.setflags(write=False)
    return h


@dataclass(frozen=True)
class Level:
    energy: float
    state: SpinorState
    label: str


@dataclass(frozen=True)
class EigenSystem:
    """Four eigenpairs sorted by ascending energy."""

    levels: tuple
    hamiltonian: np.ndarray = field(repr=False, compare=False)

    @property
    def energies(self):
        return np.array([lvl.energy for lvl in self.levels])

    @property
    def vectors(self):
        """Eigenvectors as the columns of a 4x4 matrix."""
        return np.stack([lvl.state.amplitudes for lvl in self.levels], axis=1)

    def by_label(self, label):
        for lvl in self.levels:
            if lvl.label == label:
                return lvl
        raise KeyError(label)

    def eigenspaces(self, rtol=1e-9):
        """Group levels by energy: list of ``(energy, projector)``.

        Levels closer than ``rtol`` times the spectral scale share one
        projector, so degenerate subspaces are basis independent.
        """
        w = self.energies
        scale = max(np.abs(w).max(), 1e-300)
        vecs = self.vectors
        groups = []
        for i, e in enumerate(w):
            if groups and abs(e - groups[-1][0][-1]) <= rtol * scale:
                groups[-1][0].append(e)
                groups[-1][1].append(i)
            else:
                groups.append(([e], [i]))
        out = []
        for energies, idx in groups:
            v = vecs[:, idx]
            out.append((float(np.mean(energies)), v @ v.conj().T))
        return out


def analytic_eigensystem(params: ModelParams) -> EigenSystem:
    """Closed-form eigenpairs for the K valley (tau = +1).

    For ``epsilon > 0`` the states are
    ``(e^{-i theta}, nu g, +-i g, +-nu i e^{i theta}) / sqrt(2 (1 + g^2))``
    with ``g = eps_pm / eps``; at charge neutrality the explicit
    ``epsilon = 0`` forms are returned instead (the general form is 0/0).
    """
    if params.tau != 1:
        raise UnsupportedBranchError(
            "closed-form eigenstates are only available for tau=+1; use numeric_eigensystem"
        )
    h = build_hamiltonian(params)
    lam = params.lambda_R
    r2 = 1.0 / math.sqrt(2.0)
    if params.epsilon < CNP_THRESHOLD:
        spec = {
            "h+": (-2 * lam, (0, -r2, 1j * r2, 0)),
            "h-": (0.0, (r2, 0, 0, 1j * r2)),
            "e-": (0.0, (r2, 0, 0, -1j * r2)),
            "e+": (2 * lam, (0, r2, 1j * r2, 0)),
        }
    else:
        eps_minus, eps_plus = params.band_energies
        phase = complex(math.cos(params.theta), math.sin(params.theta))
        spec = {}
        for branch, e_branch in (("+", eps_plus), ("-", eps_minus)):
            sign = 1.0 if branch == "+" else -1.0
            g = e_branch / params.epsilon
            norm = math.sqrt(2.0 * (1.0 + g * g))
            for carrier, nu in (("e", 1.0), ("h", -1.0)):
                vec = np.array(
                    [phase.conjugate(), nu * g, sign * 1j * g, sign * nu * 1j * phase]
                ) / norm
                spec[carrier + branch] = (nu * e_branch, vec)
    levels = tuple(
        Level(float(spec[lbl][0]), SpinorState(spec[lbl][1]), lbl) for lbl in LEVEL_LABELS
    )
    return EigenSystem(levels, h)


def numeric_eigensystem(h) -> EigenSystem:
    """Eigenpairs of a Hermitian 4x4 matrix by cyclic Jacobi iteration.

    Labels follow energy order (``h+, h-, e-, e+``); degenerate pairs come
    back as an arbitrary orthonormal basis of their subspace.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (4, 4):
        raise NumericDomainError(f"expected a 4x4 Hamiltonian, got shape {h.shape}")
    w, v = jacobi_eigh(h)
    levels = tuple(
        Level(float(w[i]), SpinorState(v[:, i]), LEVEL_LABELS[i]) for i in range(4)
    )
    return EigenSystem(levels, h)


def eigensystem(params: ModelParams) -> EigenSystem:
    """Analytic eigensystem where one exists, Jacobi otherwise."""
    if params.tau == 1:
        return analytic_eigensystem(params)
    return numeric_eigensystem(build_hamiltonian(params))


def eigenstate_concurrence(epsilon, lambda_R):
    """Concurrence shared by all four eigenstates, ``lambda_R / sqrt(eps^2 + lambda_R^2)``."""
    return lambda_R / np.hypot(epsilon, lambda_R)


def eigenstate_bloch_length(epsilon, lambda_R):
    """Length of the spin (= pseudospin) Bloch vector of any eigenstate."""
    return np.abs(epsilon) / np.hypot(epsilon, lambda_R)
