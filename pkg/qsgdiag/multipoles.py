# -*- coding: utf-8 -*-
"""
Spin operators and the orthonormal hermitean multipole basis of a spin ``s``.

Any hermitean ``[N, N]`` matrix, ``N = 2s + 1``, is a unique real linear
combination of the ``N**2`` multipoles ``T_nu``, built from symmetrized,
trace-subtracted products of the spin components and normalized such that
``Tr[T_nu T_nu'] / N = delta_nu,nu'``.
"""

import itertools
from collections import namedtuple
from fractions import Fraction
from math import factorial

import numpy as np
from .errors import DimensionError, HermiticityError

__all__ = ['spinsystem', 'hermitianmatrix', 'multipoleindex', 'multipolebasis',
           'coefficientvector', 'spin_operators', 'symmetrized_product',
           'build_basis', 'decompose', 'reconstruct', 'basis_to_dict']


multipoleindex = namedtuple('multipoleindex', ['rank', 'components'])
multipoleindex.__doc__ = """Collective index ``(a; j_1, ..., j_a)`` of a multipole."""


class spinsystem(object):
    """
    A single spin ``s`` acting on a Hilbert space of dimension ``N = 2s + 1``.

    Args:
        s (optional[float, str, Fraction]): Spin quantum number. Strings such
            as ``'3/2'`` are accepted.
        N (optional[int]): Dimension of the Hilbert space. Only one of ``s``
            and ``N`` needs to be given.
        hbar (optional[float]): Value of the reduced Planck constant.
    """

    def __init__(self, s=None, N=None, hbar=1.0):
        if s is None and N is None:
            raise ValueError("Must provide either `s` or `N`.")
        if s is not None:
            s = Fraction(str(s))
            if (2 * s).denominator != 1 or s <= 0:
                raise ValueError("`s` must be a half-integer, got {}.".format(s))
            if N is not None and int(2 * s + 1) != int(N):
                raise ValueError("Inconsistent `s` and `N`.")
            N = int(2 * s + 1)
        N = int(N)
        if N < 2:
            raise ValueError("Dimension must be at least 2, got {:d}.".format(N))
        if not np.isfinite(hbar) or hbar == 0.0:
            raise ValueError("`hbar` must be finite and non-zero.")
        self.N = N
        self.s = Fraction(N - 1, 2)
        self.hbar = float(hbar)

    def __repr__(self):
        return "spinsystem(s={}, N={:d}, hbar={})".format(self.s, self.N,
                                                        self.hbar)

    def __eq__(self, other):
        if not isinstance(other, spinsystem):
            return NotImplemented
        return self.N == other.N and self.hbar == other.hbar

    def __hash__(self):
        return hash((self.N, self.hbar))


class hermitianmatrix(object):
    """
    A validated hermitean matrix.

    Args:
        entries (array_like): Square array of complex entries.
        tol (optional[float]): Hermiticity tolerance relative to the largest
            absolute entry. Inputs failing the check are rejected, not
            symmetrized.
    """

    tol = 1e-12

    def __init__(self, entries, tol=None):
        entries = np.array(entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionError("Matrix must be square, "
                                 + "got shape {}.".format(entries.shape))
        if entries.shape[0] < 2:
            raise DimensionError("Matrix must be at least 2 x 2.")
        if not np.all(np.isfinite(entries)):
            raise ValueError("Matrix contains non-finite entries.")
        tol = hermitianmatrix.tol if tol is None else tol
        scale = np.max(np.abs(entries))
        asym = np.max(np.abs(entries - entries.conj().T))
        if asym > tol * scale:
            raise HermiticityError("Matrix is not hermitean: max |A - A^H| = "
                                   + "{:.3e}.".format(asym))
        entries.flags.writeable = False
        self.entries = entries
        self.dim = entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)

    def __repr__(self):
        return "hermitianmatrix(dim={:d})".format(self.dim)


class coefficientvector(object):
    """
    Real multipole coefficients ``a_nu`` aligned with a basis ordering.

    Args:
        spin (spinsystem): Spin the coefficients refer to.
        a (array_like): The ``N**2`` real coefficients.
    """

    def __init__(self, spin, a):
        a = np.array(a, dtype=float)
        if a.shape != (spin.N**2,):
            raise DimensionError("Expected {:d} coefficients, ".format(spin.N**2)
                                 + "got {}.".format(a.shape))
        a.flags.writeable = False
        self.spin = spin
        self.a = a

    def __len__(self):
        return self.a.size

    def __getitem__(self, idx):
        return self.a[idx]

    def __repr__(self):
        return "coefficientvector(N={:d}, a={})".format(self.spin.N, self.a)


class multipolebasis(object):
    """
    Ordered orthonormal basis of hermitean multipole operators for a spin.

    The ordering is rank-major and lexicographic in the sorted components
    within each rank. Elements are read-only and the instance may be shared.

    Args:
        spin (spinsystem): The spin the basis acts on.
        indices (list): ``multipoleindex`` of each element.
        elements (ndarray): ``[N**2, N, N]`` array of the operators.
        scales (ndarray): Normalization factor applied to each trace-subtracted
            symmetrized product after orthogonalization.
    """

    def __init__(self, spin, indices, elements, scales):
        elements = np.array(elements, dtype=np.complex128)
        scales = np.array(scales, dtype=float)
        elements.flags.writeable = False
        scales.flags.writeable = False
        self.spin = spin
        self.N = spin.N
        self.indices = tuple(indices)
        self.elements = elements
        self.scale_records = scales
        self._spectra = None

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(zip(self.indices, self.elements))

    def __repr__(self):
        return "multipolebasis(s={}, elements={:d})".format(self.spin.s,
                                                           len(self))

    def gram(self):
        """Gram matrix ``Tr[T_nu T_nu'] / N``."""
        E = self.elements
        return np.einsum('aij,bji->ab', E, E).real / self.N

    def rank_slice(self, rank):
        """Return the slice of elements with the given rank."""
        ranks = np.array([idx.rank for idx in self.indices])
        idxs = np.where(ranks == rank)[0]
        if idxs.size == 0:
            raise ValueError("No elements of rank {:d}.".format(rank))
        return slice(idxs[0], idxs[-1] + 1)


# -- Spin operators. -- #

def spin_operators(spin):
    """
    Spin matrices ``(S_1, S_2, S_3)`` in the eigenbasis of ``S_3`` ordered by
    descending magnetic quantum number.

    Args:
        spin (spinsystem): The spin.

    Returns:
        S1, S2, S3 (ndarray): Three ``[N, N]`` complex matrices.
    """
    s = float(spin.s)
    m = s - np.arange(spin.N)
    raising = np.zeros((spin.N, spin.N), dtype=np.complex128)
    for i in range(1, spin.N):
        raising[i - 1, i] = np.sqrt(s * (s + 1.0) - m[i] * (m[i] + 1.0))
    raising *= spin.hbar
    lowering = raising.conj().T
    S1 = 0.5 * (raising + lowering)
    S2 = -0.5j * (raising - lowering)
    S3 = spin.hbar * np.diag(m).astype(np.complex128)
    return S1, S2, S3


def _ordered_sum(mats, counts, memo):
    """Sum of the products over the distinct orderings of the multiset with
    ``counts[j]`` copies of ``mats[j]``."""
    key = tuple(sorted(id(M) for M, n in zip(mats, counts) for _ in range(n)))
    if key in memo:
        return memo[key]
    total = 0.0
    for j, n in enumerate(counts):
        if n == 0:
            continue
        lower = list(counts)
        lower[j] -= 1
        total = total + mats[j] @ _ordered_sum(mats, lower, memo)
    memo[key] = total
    return total


def symmetrized_product(ops, N=None, memo=None):
    """
    Average of the product of ``ops`` over all orderings.

    Equal operators are grouped, and the sum over the distinct orderings of
    the resulting multiset is built up one factor at a time, so that the
    cost grows polynomially with the number of factors.

    Args:
        ops (list): Spin-component matrices, all of the same shape. At most
            ``N - 1 = 2s`` of them.
        N (optional[int]): Dimension, only required for an empty ``ops``.
        memo (optional[dict]): Partial sums shared between calls on the same
            operator objects, keyed by their ``id``.

    Returns:
        ndarray: The symmetrized ``[N, N]`` product.
    """
    ops = [op if isinstance(op, np.ndarray) and op.dtype == np.complex128
           else np.asarray(op, dtype=np.complex128) for op in ops]
    if N is None:
        if not ops:
            raise ValueError("Must provide `N` for an empty product.")
        N = ops[0].shape[0]
    if any(op.shape != (N, N) for op in ops):
        raise DimensionError("All operators must have shape ({0}, {0}).".format(N))
    k = len(ops)
    if k > N - 1:
        raise ValueError("Rank {:d} exceeds 2s = {:d}; ".format(k, N - 1)
                         + "such products depend on lower ranks.")
    if k == 0:
        return np.eye(N, dtype=np.complex128)

    mats, counts = [], []
    for op in ops:
        for j, M in enumerate(mats):
            if M is op or np.array_equal(M, op):
                counts[j] += 1
                break
        else:
            mats.append(op)
            counts.append(1)
    if memo is None:
        memo = {}
    memo.setdefault((), np.eye(N, dtype=np.complex128))
    weight = np.prod([factorial(n) for n in counts]) / factorial(k)
    return weight * _ordered_sum(mats, counts, memo)


def _inner(X, Y, N):
    return np.vdot(X, Y).real / N


# -- Basis construction. -- #

def build_basis(spin, rtol=1e-9):
    """
    Build the orthonormal multipole basis of ``spin``.

    Within each rank ``a`` the symmetrized products are trace-subtracted,
    orthogonalized against all lower ranks and the already accepted elements
    of the same rank (two passes of modified Gram-Schmidt), and normalized.
    Products which are linearly dependent on the accepted ones are skipped.

    Args:
        spin (spinsystem): The spin.
        rtol (optional[float]): Relative residual below which a product is
            deemed dependent.

    Returns:
        multipolebasis: The basis, cached per ``(N, hbar, rtol)``.
    """
    key = (spin.N, spin.hbar, rtol)
    if key in build_basis.cache:
        return build_basis.cache[key]

    N = spin.N
    S = spin_operators(spin)
    identity = np.eye(N, dtype=np.complex128)
    indices = [multipoleindex(0, ())]
    elements = [identity]
    scales = [1.0]

    memo = {}
    for rank in range(1, N):
        accepted = 0
        for components in itertools.combinations_with_replacement((1, 2, 3), rank):
            T = symmetrized_product([S[j - 1] for j in components], N, memo)
            T = 0.5 * (T + T.conj().T)
            T = T - np.trace(T).real / N * identity
            norm_raw = np.sqrt(_inner(T, T, N))
            for _ in range(2):
                for E in elements:
                    T = T - _inner(E, T, N) * E
            norm = np.sqrt(_inner(T, T, N))
            if norm <= rtol * norm_raw:
                continue
            indices.append(multipoleindex(rank, components))
            elements.append(T / norm)
            scales.append(1.0 / norm)
            accepted += 1
        if accepted != 2 * rank + 1:
            raise RuntimeError("Found {:d} independent multipoles ".format(accepted)
                               + "of rank {:d}, expected {:d}.".format(rank, 2 * rank + 1))

    basis = multipolebasis(spin, indices, np.array(elements), scales)
    build_basis.cache[key] = basis
    return basis


build_basis.cache = {}


# -- Expansion in the basis. -- #

def _check_aligned(dim, basis):
    if dim != basis.N:
        raise DimensionError("Matrix dimension {:d} does not match ".format(dim)
                             + "basis dimension {:d}.".format(basis.N))


def decompose(A, basis, imag_tol=1e-10):
    """
    Multipole coefficients ``a_nu = Tr[A T_nu] / N``.

    Args:
        A (hermitianmatrix or array_like): The matrix to expand. Arrays are
            validated for hermiticity.
        basis (multipolebasis): The basis.
        imag_tol (optional[float]): Largest imaginary part tolerated before
            discarding, relative to ``max(1, max|A|)``.

    Returns:
        coefficientvector: The real coefficients.
    """
    if not isinstance(A, hermitianmatrix):
        A = hermitianmatrix(A)
    _check_aligned(A.dim, basis)
    a = np.einsum('ij,nji->n', A.entries, basis.elements) / basis.N
    scale = max(1.0, np.max(np.abs(A.entries)))
    if np.max(np.abs(a.imag)) > imag_tol * scale:
        raise HermiticityError("Coefficients have imaginary parts up to "
                               + "{:.3e}.".format(np.max(np.abs(a.imag))))
    return coefficientvector(basis.spin, a.real)


def reconstruct(coeffs, basis):
    """
    Sum ``sum_nu a_nu T_nu``, the inverse of :func:`decompose`.

    Args:
        coeffs (coefficientvector or array_like): Coefficients in basis order.
        basis (multipolebasis): The basis.

    Returns:
        hermitianmatrix: The reconstructed matrix.
    """
    a = coeffs.a if isinstance(coeffs, coefficientvector) else np.asarray(coeffs, dtype=float)
    if a.shape != (len(basis),):
        raise DimensionError("Expected {:d} coefficients, ".format(len(basis))
                             + "got {}.".format(a.shape))
    return hermitianmatrix(np.einsum('n,nij->ij', a, basis.elements))


def basis_to_dict(basis):
    """JSON-ready description of a basis, including the scale records."""
    elements = []
    for (index, T), scale in zip(basis, basis.scale_records):
        elements.append({'rank': index.rank,
                         'components': list(index.components),
                         'scale': float(scale),
                         'matrix': [[[float(z.real), float(z.imag)] for z in row]
                                    for row in T]})
    return {'schema': 'qsgdiag/1',
            's': str(basis.spin.s),
            'N': basis.N,
            'hbar': basis.spin.hbar,
            'elements': elements}
