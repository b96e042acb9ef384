# -*- coding: utf-8 -*-
"""
Projective measurement of an observable on the maximally mixed state.

The spectrum of the observable comes from a classical eigensolver standing in
for the physical apparatus: it only fixes the outcome distribution, the
reported eigenvalues are the sampled outcomes.
"""

import math
import warnings
from collections import namedtuple

import numpy as np
from .errors import DimensionError
from .jacobi import eigh
from .multipoles import hermitianmatrix

__all__ = ['spectrum', 'densitymatrix', 'stoppingrule', 'measurementrecord',
           'oracle_spectrum', 'measure_once', 'repeat_measurement',
           'run_experiment', 'missing_probability', 'cluster_outcomes',
           'harvest_eigenvalues', 'substream']


cluster = namedtuple('cluster', ['estimate', 'count', 'eigenspaces'])


def substream(seed, *key):
    """
    Independent random generator for ``key`` under ``seed``.

    Args:
        seed (int): Master seed, an unsigned 64-bit integer.
        key (int): Stream label followed by block or element indices, e.g.
            ``(0, block)`` for eigenvalue runs.

    Returns:
        numpy.random.Generator: A Philox-backed generator.
    """
    seed = int(seed)
    if seed < 0 or seed >= 2**64:
        raise ValueError("`seed` must be an unsigned 64-bit integer.")
    sequence = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(sequence))


class spectrum(object):
    """
    Distinct eigenvalues of a hermitean matrix with their eigenspaces.

    Args:
        values (array_like): Distinct eigenvalues in increasing order.
        vectors (list): One ``[N, m_n]`` array of orthonormal eigenvectors per
            eigenvalue.
    """

    def __init__(self, values, vectors):
        self.values = np.array(values, dtype=float)
        self.vectors = [np.array(v, dtype=np.complex128) for v in vectors]
        if len(self.vectors) != self.values.size:
            raise DimensionError("Need one eigenspace per eigenvalue.")
        if np.any(np.diff(self.values) <= 0.0):
            raise ValueError("Eigenvalues must be distinct and increasing.")
        self.projectors = np.array([v @ v.conj().T for v in self.vectors])
        self.multiplicities = np.array([v.shape[1] for v in self.vectors])
        self.N = self.projectors.shape[1]
        for array in [self.values, self.projectors, self.multiplicities]:
            array.flags.writeable = False

    def __len__(self):
        return self.values.size

    def __repr__(self):
        return "spectrum(values={}, multiplicities={})".format(
            self.values, self.multiplicities)

    def matrix(self):
        """``sum_n A_n P_n``."""
        return np.einsum('n,nij->ij', self.values, self.projectors)

    def index_of(self, value):
        """Index of the eigenspace with exactly this eigenvalue."""
        idxs = np.where(self.values == value)[0]
        if idxs.size == 0:
            raise ValueError("{} is not an eigenvalue.".format(value))
        return int(idxs[0])


class densitymatrix(object):
    """
    A validated density matrix: hermitean, unit trace, positive.

    Args:
        entries (array_like): ``[N, N]`` complex array.
        tol (optional[float]): Tolerance on trace and eigenvalues.
        check_positive (optional[bool]): Verify the eigenvalues are non-negative.
    """

    tol = 1e-10

    def __init__(self, entries, tol=None, check_positive=True):
        tol = densitymatrix.tol if tol is None else tol
        entries = np.array(entries, dtype=np.complex128)
        hermitianmatrix(entries, tol=max(tol, hermitianmatrix.tol))
        trace = np.trace(entries)
        if abs(trace - 1.0) > tol:
            raise ValueError("Trace must be 1, got {}.".format(trace))
        if check_positive and eigh(entries)[0][0] < -tol:
            raise ValueError("Density matrix has negative eigenvalues.")
        entries.flags.writeable = False
        self.entries = entries
        self.N = entries.shape[0]

    @classmethod
    def mixed(cls, N):
        """The maximally mixed state ``I_N / N``."""
        return cls(np.eye(N) / N)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)

    def __repr__(self):
        return "densitymatrix(N={:d})".format(self.N)


class stoppingrule(object):
    """
    Number of runs ``N_0`` such that every eigenvalue is seen with
    probability at least ``1 - epsilon``, from the union bound
    ``N ((N - 1) / N)**N_0 <= epsilon``.

    Args:
        epsilon (optional[float]): Bound on the probability to miss any value.
        max_runs (optional[int]): Hard cap on the number of runs.
    """

    def __init__(self, epsilon=1e-6, max_runs=10**6):
        if not 0.0 < epsilon < 1.0:
            raise ValueError("`epsilon` must lie in (0, 1).")
        if int(max_runs) < 1:
            raise ValueError("`max_runs` must be positive.")
        self.epsilon = float(epsilon)
        self.max_runs = int(max_runs)

    def minimum_runs(self, N):
        """Smallest ``N_0`` satisfying the union bound, ignoring the cap."""
        if N < 2:
            raise ValueError("`N` must be at least 2.")
        ratio = (N - 1.0) / N
        N0 = max(0, int(math.ceil(math.log(self.epsilon / N) / math.log(ratio))))
        while N * ratio**N0 > self.epsilon:
            N0 += 1
        while N0 > 0 and N * ratio**(N0 - 1) <= self.epsilon:
            N0 -= 1
        return N0

    def runs(self, N):
        """``N_0`` capped at ``max_runs``."""
        return min(self.minimum_runs(N), self.max_runs)

    def __repr__(self):
        return "stoppingrule(epsilon={}, max_runs={:d})".format(self.epsilon,
                                                               self.max_runs)


class measurementrecord(object):
    """
    Outcomes of repeated measurements.

    Args:
        seed (int): Master seed of the experiment.
        values (ndarray): Recorded outcome of each run, including readout noise.
        eigenspaces (ndarray): Index of the eigenspace each run projected onto.
        nspaces (int): Number of distinct eigenspaces of the observable.
    """

    def __init__(self, seed, values, eigenspaces, nspaces):
        self.seed = int(seed)
        self.values = np.array(values, dtype=float)
        self.eigenspaces = np.array(eigenspaces, dtype=int)
        self.runs = np.arange(self.values.size)
        self.counts = np.bincount(self.eigenspaces, minlength=nspaces)
        self.complete = bool(np.all(self.counts > 0))
        for array in [self.values, self.eigenspaces, self.runs, self.counts]:
            array.flags.writeable = False

    @property
    def outcomes(self):
        """List of ``(run index, value, eigenspace index)``."""
        return list(zip(self.runs.tolist(), self.values.tolist(),
                        self.eigenspaces.tolist()))

    def __len__(self):
        return self.values.size

    def __repr__(self):
        return "measurementrecord(runs={:d}, counts={}, complete={})".format(
            len(self), self.counts.tolist(), self.complete)


# -- Classical stand-in for the apparatus. -- #

def oracle_spectrum(A, degeneracy_tol=1e-9):
    """
    Eigendecomposition of ``A`` with degenerate eigenvalues merged.

    Args:
        A (hermitianmatrix or array_like): The matrix.
        degeneracy_tol (optional[float]): Eigenvalues closer than
            ``degeneracy_tol * max|A_n|`` share one eigenspace.

    Returns:
        spectrum: Distinct eigenvalues and eigenspaces.
    """
    if not isinstance(A, hermitianmatrix):
        A = hermitianmatrix(A)
    if degeneracy_tol < 0.0:
        raise ValueError("`degeneracy_tol` must be non-negative.")
    values, vectors, _ = eigh(A.entries)
    scale = max(np.max(np.abs(values)), np.finfo(float).tiny)
    groups = [[0]]
    for i in range(1, values.size):
        if values[i] - values[groups[-1][-1]] <= degeneracy_tol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    merged = [float(np.mean(values[g])) if len(g) > 1 else float(values[g[0]])
              for g in groups]
    return spectrum(merged, [vectors[:, g] for g in groups])


# -- Projection postulate. -- #

def _probabilities(rho, spec):
    """``p_n = Tr[rho P_n]`` with numerically empty branches dropped."""
    p = np.einsum('ij,nji->n', rho, spec.projectors).real
    p = np.where(p < 1e-15, 0.0, p)
    total = p.sum()
    if total <= 0.0:
        raise ValueError("State has no weight on the spectrum.")
    return p / total


def _cumulative(p):
    """Cumulative distribution, exactly 1 from the last non-empty branch on."""
    cumulative = np.cumsum(p)
    cumulative[np.flatnonzero(p)[-1]:] = 1.0
    return cumulative


def _sample(cumulative, u):
    """Inverse-CDF draw of branch indices for uniforms ``u`` in [0, 1)."""
    return np.searchsorted(cumulative, u, side='right')


def _check_state(rho, spec):
    if not isinstance(rho, densitymatrix):
        rho = densitymatrix(rho)
    if rho.N != spec.N:
        raise DimensionError("State and spectrum differ in dimension.")
    return rho


def measure_once(rho, spec, rng):
    """
    Single projective measurement of the observable with spectrum ``spec``.

    Args:
        rho (densitymatrix): State before the measurement.
        spec (spectrum): Spectrum of the observable.
        rng (numpy.random.Generator): Random generator.

    Returns:
        value (float): The outcome ``A_n``.
        post_state (densitymatrix): ``P_n rho P_n / p_n``.
    """
    value, _, post = _measure(_check_state(rho, spec), spec, rng)
    return value, post


def _measure(rho, spec, rng):
    p = _probabilities(rho.entries, spec)
    n = int(_sample(_cumulative(p), rng.random()))
    P = spec.projectors[n]
    post = P @ rho.entries @ P
    post = post / np.trace(post).real
    return spec.values[n], n, densitymatrix(0.5 * (post + post.conj().T))


def repeat_measurement(post_state, spec, rng, repeats=10):
    """
    Measure a post-measurement state again ``repeats`` times.

    Returns:
        bool: ``True`` if every repetition returned the same eigenvalue.
    """
    rho = _check_state(post_state, spec)
    first = _measure(rho, spec, rng)[1]
    return all(_measure(rho, spec, rng)[1] == first for _ in range(repeats))


def _run_block(args):
    seed, block, size, cumulative, noise_sigma = args
    rng = substream(seed, 0, block)
    idxs = _sample(cumulative, rng.random(size))
    noise = rng.normal(0.0, noise_sigma, size) if noise_sigma > 0.0 else None
    return idxs, noise


def run_experiment(spec, rule, seed, nruns=None, noise_sigma=0.0, pool=None,
                   block_size=4096, verbose=False):
    """
    Repeat the measurement on freshly prepared ``I_N / N`` states.

    Each run is an independent projective measurement of a fresh copy of the
    mixed state, so instead of calling :func:`measure_once` in a loop the
    outcome indices are drawn directly from its outcome distribution
    ``m_n / N``, which is the same distribution.

    Runs are drawn in blocks of ``block_size`` with one random substream per
    block, so the record only depends on ``seed`` and never on ``pool``.

    Args:
        spec (spectrum): Spectrum of the observable.
        rule (stoppingrule): Sets the number of runs.
        seed (int): Master seed.
        nruns (optional[int]): Override the number of runs.
        noise_sigma (optional[float]): Standard deviation of additive Gaussian
            readout noise.
        pool (optional): An object with a ``map`` method.
        block_size (optional[int]): Runs per random substream.
        verbose (optional[bool]): Print a summary.

    Returns:
        measurementrecord: All outcomes in run order.
    """
    if noise_sigma < 0.0:
        raise ValueError("`noise_sigma` must be non-negative.")
    nruns = rule.runs(spec.N) if nruns is None else int(nruns)
    if nruns < 0:
        raise ValueError("`nruns` must be non-negative.")
    p = _probabilities(densitymatrix.mixed(spec.N).entries, spec)
    cumulative = _cumulative(p)
    tasks = [(seed, b, min(block_size, nruns - b * block_size), cumulative,
              noise_sigma) for b in range(int(math.ceil(nruns / block_size)))]
    results = list((map if pool is None else pool.map)(_run_block, tasks))
    idxs = np.concatenate([r[0] for r in results]) if results else np.zeros(0, int)
    values = spec.values[idxs]
    if noise_sigma > 0.0:
        values = values + np.concatenate([r[1] for r in results])
    record = measurementrecord(seed, values, idxs, len(spec))
    if not record.complete:
        warnings.warn("Only {:d} of {:d} eigenvalues found after {:d} runs.".format(
            int(np.sum(record.counts > 0)), len(spec), nruns))
    if verbose:
        print("Measured {:d} runs: counts = {}.".format(nruns, record.counts.tolist()))
    return record


def missing_probability(N, N0, approximate=False):
    """
    Probability that a given non-degenerate eigenvalue is not observed after
    ``N0`` runs, ``((N - 1) / N)**N0``, or ``exp(-N0 / 2s)`` if
    ``approximate``.
    """
    if N < 2 or N0 < 0:
        raise ValueError("Need N >= 2 and N0 >= 0.")
    if approximate:
        return math.exp(-N0 / (N - 1.0))
    return ((N - 1.0) / N)**N0


# -- Reporting. -- #

def cluster_outcomes(record, cluster_tol=0.0):
    """
    Group recorded outcomes whose neighbours lie within ``cluster_tol``.

    Returns:
        clusters (list): ``cluster(estimate, count, eigenspaces)`` tuples in
            increasing order of the estimate.
        overlapping (bool): ``True`` if any cluster mixes eigenspaces or any
            eigenspace is split over several clusters.
    """
    if len(record) == 0:
        raise ValueError("Record is empty.")
    if cluster_tol < 0.0:
        raise ValueError("`cluster_tol` must be non-negative.")
    order = np.argsort(record.values, kind='stable')
    values, spaces = record.values[order], record.eigenspaces[order]
    breaks = np.where(np.diff(values) > cluster_tol)[0] + 1
    clusters = []
    for v, s in zip(np.split(values, breaks), np.split(spaces, breaks)):
        estimate = float(v[0]) if np.all(v == v[0]) else float(np.mean(v))
        clusters.append(cluster(estimate, int(v.size), sorted(set(s.tolist()))))
    labels = [c.eigenspaces for c in clusters]
    overlapping = any(len(l) > 1 for l in labels)
    flat = [n for l in labels for n in l]
    overlapping = overlapping or len(flat) != len(set(flat))
    return clusters, overlapping


def harvest_eigenvalues(record, cluster_tol=0.0):
    """
    Eigenvalue estimates and counts from a measurement record.

    Returns:
        list: ``(estimate, count)`` in increasing order.
    """
    clusters, overlapping = cluster_outcomes(record, cluster_tol)
    if overlapping:
        warnings.warn("Outcome clusters overlap; increase the separation "
                      + "or change `cluster_tol`.")
    return [(c.estimate, c.count) for c in clusters]
