"""Cyclic Jacobi diagonalization for small complex Hermitian matrices.

Used as an independent numerical oracle for the closed-form eigensystem,
so it deliberately avoids LAPACK.
"""

import math

import numpy as np

from .errors import NumericDomainError

HERMITIAN_TOL = 1e-12


def check_hermitian(a, tol=HERMITIAN_TOL):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NumericDomainError(f"expected a square matrix, got shape {a.shape}")
    scale = max(np.abs(a).max(initial=0.0), 1.0)
    skew = np.abs(a - a.conj().T).max(initial=0.0)
    if skew > tol * scale:
        raise NumericDomainError(
            f"matrix is not Hermitian: max |A - A^H| = {skew:.3e} exceeds {tol:g} x {scale:.3e}"
        )
    return a


def _rotation(a, p, q):
    """Unitary J with (J^H a J)[p, q] == 0, touching only rows/cols p, q."""
    apq = a[p, q]
    r = abs(apq)
    phase = apq / r
    theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    j = np.eye(a.shape[0], dtype=complex)
    # phase gauge on q makes the pivot real, then a real Givens rotation
    j[p, p] = c
    j[p, q] = s
    j[q, p] = -s * phase.conjugate()
    j[q, q] = c * phase.conjugate()
    return j


def jacobi_eigh(a, tol=1e-15, max_sweeps=60):
    """Eigen-decompose a Hermitian matrix by cyclic Jacobi sweeps.

    Parameters
    ----------
    a : array_like, shape (n, n)
        Hermitian matrix; checked to ``1e-12`` relative.
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm falls below
        ``tol * ||a||_F``.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues in ascending order.
    v : ndarray, shape (n, n)
        Orthonormal eigenvectors as columns, ``a @ v[:, i] = w[i] v[:, i]``.
    """
    a = check_hermitian(a).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n), v

    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= 1e-18 * norm:
                    continue
                j = _rotation(a, p, q)
                a = j.conj().T @ a @ j
                a[p, q] = a[q, p] = 0.0
                v = v @ j
    else:
        raise NumericDomainError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]
