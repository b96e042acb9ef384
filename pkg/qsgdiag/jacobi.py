# -*- coding: utf-8 -*-

import numpy as np
import numba
from .errors import ConvergenceError, DimensionError

__all__ = ['eigh']


# -- Compiled kernel. -- #

@numba.njit
def _off_norm(a):
    """Frobenius norm of the off-diagonal part."""
    n = a.shape[0]
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                total += a[i, j].real**2 + a[i, j].imag**2
    return np.sqrt(total)


@numba.njit
def _rotate(a, v, p, q):
    """Apply the unitary rotation zeroing ``a[p, q]`` in place."""
    n = a.shape[0]
    apq = a[p, q]
    r = abs(apq)
    phase = apq / r
    theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    # Rotation G acting on columns p and q.
    gpp = c + 0.0j
    gpq = s + 0.0j
    gqp = -s * phase.conjugate()
    gqq = c * phase.conjugate()

    for i in range(n):
        aip, aiq = a[i, p], a[i, q]
        a[i, p] = aip * gpp + aiq * gqp
        a[i, q] = aip * gpq + aiq * gqq
    for j in range(n):
        apj, aqj = a[p, j], a[q, j]
        a[p, j] = gpp.conjugate() * apj + gqp.conjugate() * aqj
        a[q, j] = gpq.conjugate() * apj + gqq.conjugate() * aqj
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real

    for i in range(n):
        vip, viq = v[i, p], v[i, q]
        v[i, p] = vip * gpp + viq * gqp
        v[i, q] = vip * gpq + viq * gqq


@numba.njit
def _sweep(a, v, tol, max_sweeps):
    """Cyclic sweeps until the off-diagonal norm drops below ``tol``."""
    n = a.shape[0]
    for sweep in range(max_sweeps):
        if _off_norm(a) <= tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > 0.0:
                    _rotate(a, v, p, q)
    if _off_norm(a) <= tol:
        return max_sweeps
    return -1


# -- Python wrapper. -- #

def eigh(A, tol=None, max_sweeps=64):
    """
    Diagonalize a hermitean matrix with cyclic complex Jacobi rotations.

    Args:
        A (ndarray): Hermitean ``[N, N]`` matrix.
        tol (optional[float]): Absolute off-diagonal norm at which to stop. By
            default ``N`` machine epsilons times the Frobenius norm of ``A``.
        max_sweeps (optional[int]): Maximum number of full sweeps.

    Returns:
        values (ndarray): Eigenvalues sorted into increasing order.
        vectors (ndarray): Unitary matrix with the eigenvectors as columns.
        sweeps (int): Number of sweeps used.
    """
    A = np.array(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError("Matrix must be square, got shape {}.".format(A.shape))
    scale = np.linalg.norm(A)
    if tol is None:
        tol = A.shape[0] * np.finfo(float).eps * scale
    a = A.copy()
    v = np.eye(A.shape[0], dtype=np.complex128)
    sweeps = _sweep(a, v, float(tol), int(max_sweeps))
    if sweeps < 0:
        raise ConvergenceError("Jacobi rotations did not converge after "
                               + "{:d} sweeps.".format(max_sweeps))
    values = np.diag(a).real.copy()
    idxs = np.argsort(values, kind='stable')
    return values[idxs], v[:, idxs], sweeps
