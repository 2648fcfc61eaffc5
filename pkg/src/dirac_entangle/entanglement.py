"""Concurrence and CHSH violation for pure spin-pseudospin states."""

import numpy as np

from .basis import as_spin_by_sublattice
from .states import amplitudes_of


def concurrence(state):
    """``2 |ad - bc|`` for amplitudes ``(a, b, c, d)``.

    Accepts a :class:`SpinorState` or any ``(..., 4)`` array and returns a
    float or an array of the leading shape, clipped to ``[0, 1]``.
    """
    amps = amplitudes_of(state)
    a, b, c, d = amps[..., 0], amps[..., 1], amps[..., 2], amps[..., 3]
    value = np.minimum(2.0 * np.abs(a * d - b * c), 1.0)
    return float(value) if value.ndim == 0 else value


def reduced_spin_matrix(state):
    """2x2 spin density matrix with the pseudospin traced out."""
    m = as_spin_by_sublattice(amplitudes_of(state))
    return np.einsum("...ik,...jk->...ij", m, m.conj())


def concurrence_oracle(state):
    """Concurrence from the purity of the reduced state, ``sqrt(2 (1 - Tr rho^2))``.

    Independent of :func:`concurrence`; the two agree for normalized pure
    states.
    """
    rho = reduced_spin_matrix(state)
    purity = np.einsum("...ij,...ji->...", rho, rho).real
    value = np.sqrt(np.clip(2.0 * (1.0 - purity), 0.0, 1.0))
    return float(value) if value.ndim == 0 else value


def chsh_beta(c):
    """Maximal CHSH value relative to the local bound, ``sqrt(1 + C^2)``."""
    c = np.asarray(c, dtype=float)
    if np.any((c < -1e-14) | (c > 1 + 1e-14)):
        raise ValueError("concurrence must lie in [0, 1]")
    value = np.sqrt(1.0 + np.clip(c, 0.0, 1.0) ** 2)
    return float(value) if value.ndim == 0 else value
