"""Pauli matrices and the single place that fixes the tensor ordering.

States are written in the basis ``{A up, B up, A down, B down}``: the
sublattice (pseudospin) index runs fastest and the spin index is slow.
In numpy terms a two-qubit operator is therefore ``np.kron(spin_op,
pseudospin_op)``, and a 4-vector reshaped to ``(2, 2)`` is indexed as
``[spin, sublattice]``.
"""

import numpy as np

PAULI_0 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

BASIS_LABELS = ("A_up", "B_up", "A_down", "B_down")

for _m in (PAULI_0, PAULI_X, PAULI_Y, PAULI_Z):
    _m.setflags(write=False)


def two_qubit(pseudospin_op, spin_op):
    """Return ``pseudospin_op (x) spin_op`` as a 4x4 matrix in our basis."""
    return np.kron(spin_op, pseudospin_op)


def as_spin_by_sublattice(amplitudes):
    """View 4-amplitude arrays ``(..., 4)`` as ``(..., spin, sublattice)``."""
    amplitudes = np.asarray(amplitudes)
    return amplitudes.reshape(amplitudes.shape[:-1] + (2, 2))


SPIN_OPS = tuple(two_qubit(PAULI_0, s) for s in PAULIS)
PSEUDOSPIN_OPS = tuple(two_qubit(s, PAULI_0) for s in PAULIS)
