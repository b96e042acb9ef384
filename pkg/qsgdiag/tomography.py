# -*- coding: utf-8 -*-
"""
Reconstruction of the eigenstates selected by blocking all but one subbeam.

Expectation values of every multipole are estimated by simulated projective
measurements (or exactly) and combined into
``rho = (1 / N) sum_nu <T_nu> T_nu``.
"""

import warnings

import numpy as np
from scipy.linalg import eigh as hermitian_eigh, eigvalsh
from .errors import DimensionError
from .jacobi import eigh
from .measurement import densitymatrix, oracle_spectrum, substream
from .multipoles import hermitianmatrix

__all__ = ['expectationestimates', 'reconstructedstate', 'postselect',
           'estimate_expectations', 'reconstruct_state', 'fidelity',
           'eigenvector_residual', 'calculate_eigenstate']


class expectationestimates(object):
    """
    Estimated multipole expectation values of a state.

    Args:
        values (ndarray): ``<T_nu>`` in basis order, ``values[0] = 1``.
        stderr (ndarray): Standard error of each estimate.
        shots (int): Measurements per multipole, ``0`` for exact values.
    """

    def __init__(self, values, stderr, shots):
        self.values = np.array(values, dtype=float)
        self.stderr = np.array(stderr, dtype=float)
        self.shots_per_multipole = int(shots)
        self.values.flags.writeable = False
        self.stderr.flags.writeable = False

    @property
    def exact(self):
        return self.shots_per_multipole == 0

    def __repr__(self):
        return "expectationestimates(shots={:d}, values={})".format(
            self.shots_per_multipole, self.values)


class reconstructedstate(object):
    """
    Density matrix reconstructed from multipole expectation values.

    Attributes:
        rho_hat (densitymatrix): Reconstruction, not forced to be positive.
        dominant_vector (ndarray): Eigenvector of the largest eigenvalue.
        min_eigenvalue (float): Smallest eigenvalue of ``rho_hat``; negative
            values occur at finite statistics and are reported, not removed.
        multiplicity (int): Number of eigenvalues of ``rho_hat`` degenerate
            with the largest one.
        fidelity_vs_oracle (float or None): ``|P u|**2`` of the dominant
            vector ``u`` with the true eigenprojector, if given.
        state_fidelity (float or None): Fidelity of ``rho_hat`` with the
            normalized true eigenprojector, if given.
    """

    def __init__(self, rho_hat, dominant_vector, min_eigenvalue, multiplicity,
                 fidelity_vs_oracle=None, state_fidelity=None):
        self.rho_hat = rho_hat
        self.dominant_vector = dominant_vector
        self.min_eigenvalue = float(min_eigenvalue)
        self.multiplicity = int(multiplicity)
        self.fidelity_vs_oracle = fidelity_vs_oracle
        self.state_fidelity = state_fidelity

    def __repr__(self):
        return "reconstructedstate(N={:d}, fidelity={})".format(
            self.rho_hat.N, self.fidelity_vs_oracle)


def postselect(spec, n):
    """
    State emerging when every subbeam but the ``n``-th is blocked,
    ``P_n / Tr[P_n]``.

    Args:
        spec (spectrum): Spectrum of the observable.
        n (int): Eigenspace index.

    Returns:
        densitymatrix: The post-selected ensemble.
    """
    if not 0 <= int(n) < len(spec):
        raise IndexError("Eigenspace index {} out of range.".format(n))
    n = int(n)
    return densitymatrix(spec.projectors[n] / spec.multiplicities[n])


def _multipole_spectra(basis):
    """Spectra of the multipoles, cached on the basis."""
    if basis._spectra is None:
        basis._spectra = [oracle_spectrum(T) for T in basis.elements]
    return basis._spectra


def _estimate(args):
    rho, values, projectors, shots, seed, label, nu = args
    p = np.einsum('ij,nji->n', rho, projectors).real
    p = np.clip(p, 0.0, None)
    counts = substream(seed, 1, label, nu).multinomial(shots, p / p.sum())
    mean = np.dot(counts, values) / shots
    if shots < 2:
        return mean, 0.0
    var = (np.dot(counts, values**2) - shots * mean**2) / (shots - 1.0)
    return mean, np.sqrt(max(var, 0.0) / shots)


def estimate_expectations(rho, basis, shots=0, seed=0, pool=None, label=0):
    """
    Estimate ``<T_nu> = Tr[rho T_nu]`` for every multipole.

    For each ``nu > 0``, ``shots`` projective measurements of ``T_nu`` are
    simulated on fresh copies of ``rho`` and their outcomes averaged. With
    ``shots = 0`` the exact traces are returned.

    Args:
        rho (densitymatrix or array_like): The state.
        basis (multipolebasis): Multipole basis.
        shots (optional[int]): Measurements per multipole, ``0`` for exact.
        seed (optional[int]): Master seed; multipole ``nu`` uses its own
            substream.
        pool (optional): An object with a ``map`` method.
        label (optional[int]): Distinguishes the streams of different states
            estimated under the same seed.

    Returns:
        expectationestimates: The estimates.
    """
    if not isinstance(rho, densitymatrix):
        rho = densitymatrix(rho)
    if rho.N != basis.N:
        raise DimensionError("State and basis differ in dimension.")
    shots = int(shots)
    if shots < 0:
        raise ValueError("`shots` must be non-negative.")
    exact = np.einsum('ij,nji->n', rho.entries, basis.elements).real
    if shots == 0:
        values, stderr = exact, np.zeros(exact.size)
    else:
        tasks = [(rho.entries, spec.values, spec.projectors, shots, seed,
                  label, nu)
                 for nu, spec in enumerate(_multipole_spectra(basis)) if nu > 0]
        results = list((map if pool is None else pool.map)(_estimate, tasks))
        values = np.concatenate([[1.0], [r[0] for r in results]])
        stderr = np.concatenate([[0.0], [r[1] for r in results]])
    values[0] = 1.0
    return expectationestimates(values, stderr, shots)


def fidelity(rho, sigma):
    """
    Fidelity ``(Tr sqrt(sqrt(sigma) rho sqrt(sigma)))**2`` clipped to [0, 1].

    Args:
        rho (array_like): Possibly non-positive reconstructed state.
        sigma (array_like): Target density matrix.
    """
    w, U = hermitian_eigh(np.asarray(sigma))
    root = (U * np.sqrt(np.clip(w, 0.0, None))) @ U.conj().T
    inner = root @ np.asarray(rho) @ root
    inner = 0.5 * (inner + inner.conj().T)
    value = np.sum(np.sqrt(np.clip(eigvalsh(inner), 0.0, None)))**2
    return float(np.clip(value, 0.0, 1.0))


def reconstruct_state(estimates, basis, projector=None, degeneracy_tol=1e-6):
    """
    Density matrix ``(1 / N) sum_nu <T_nu> T_nu`` from expectation values.

    Args:
        estimates (expectationestimates): Multipole expectation values.
        basis (multipolebasis): Multipole basis.
        projector (optional[ndarray]): True eigenprojector, used for the
            fidelities only.
        degeneracy_tol (optional[float]): Eigenvalues of the reconstruction
            within this of the largest count towards its multiplicity.

    Returns:
        reconstructedstate: The reconstruction.
    """
    if estimates.values.size != len(basis):
        raise DimensionError("Estimates and basis differ in size.")
    rho = np.einsum('n,nij->ij', estimates.values, basis.elements) / basis.N
    rho_hat = densitymatrix(rho, check_positive=False)
    values, vectors, _ = eigh(rho)
    u = vectors[:, -1]
    u = u * np.exp(-1j * np.angle(u[np.argmax(np.abs(u))]))
    multiplicity = int(np.sum(values >= values[-1] - degeneracy_tol))
    if values[0] < -degeneracy_tol:
        warnings.warn("Reconstructed state has a negative eigenvalue "
                      + "{:.3e}.".format(values[0]))
    overlap, state_fidelity = None, None
    if projector is not None:
        P = np.asarray(projector)
        overlap = float(np.clip(np.vdot(u, P @ u).real, 0.0, 1.0))
        state_fidelity = fidelity(rho, P / np.trace(P).real)
    return reconstructedstate(rho_hat, u, values[0], multiplicity, overlap,
                              state_fidelity)


def eigenvector_residual(A, value, v):
    """
    Residual ``|A v - value v|`` of a candidate eigenpair.

    Args:
        A (hermitianmatrix or array_like): The matrix.
        value (float): Candidate eigenvalue.
        v (array_like): Candidate eigenvector of unit norm.
    """
    A = np.asarray(A.entries if isinstance(A, hermitianmatrix) else A)
    v = np.asarray(v, dtype=np.complex128)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("Eigenvector must not be the zero vector.")
    if abs(norm - 1.0) > 1e-10:
        raise ValueError("Eigenvector must be normalized, |v| = {:.12f}.".format(norm))
    return float(np.linalg.norm(A @ v - value * v))


def calculate_eigenstate(A, value, iterations=3, seed=0):
    """
    Eigenvector belonging to a known eigenvalue by shifted inverse iteration.

    Args:
        A (hermitianmatrix or array_like): The matrix.
        value (float): Measured eigenvalue.
        iterations (optional[int]): Number of inverse-iteration steps.
        seed (optional[int]): Seed of the random start vector.

    Returns:
        ndarray: Normalized eigenvector, phase fixed so that its largest
        component is real and positive.
    """
    if not isinstance(A, hermitianmatrix):
        A = hermitianmatrix(A)
    N = A.dim
    rng = substream(seed, 2)
    x = rng.normal(size=N) + 1j * rng.normal(size=N)
    scale = max(np.max(np.abs(A.entries)), 1.0)
    shifted = A.entries - value * np.eye(N)
    for _ in range(int(iterations)):
        try:
            x = np.linalg.solve(shifted, x)
        except np.linalg.LinAlgError:
            shifted = shifted - 1e-12 * scale * np.eye(N)
            x = np.linalg.solve(shifted, x)
        x = x / np.linalg.norm(x)
    return x * np.exp(-1j * np.angle(x[np.argmax(np.abs(x))]))
