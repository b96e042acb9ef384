# -*- coding: utf-8 -*-
"""
Interpretation of a hermitean matrix as a spin observable ``H_A(S)``.

For a spin-1/2 the observable is equivalently a spin in a homogeneous magnetic
field, ``A = a I - g mu_B B_0 . S``, whose Zeeman levels ``E_+/-`` are shifted
by ``a`` to give the eigenvalues of ``A``.
"""

from collections import namedtuple

import numpy as np
from .errors import DimensionError
from .multipoles import (spinsystem, hermitianmatrix, build_basis, decompose,
                         reconstruct)

__all__ = ['physicalconstants', 'spinobservable', 'to_observable',
           'field_for_spin_half', 'zeeman_levels', 'shift_relation',
           'closed_form_2x2']


class physicalconstants(namedtuple('physicalconstants', ['g', 'mu_B', 'hbar'])):
    """
    Physical constants, natural units by default.

    Args:
        g (optional[float]): Dimensionless g-factor.
        mu_B (optional[float]): Magneton.
        hbar (optional[float]): Reduced Planck constant.
    """

    __slots__ = ()

    def __new__(cls, g=1.0, mu_B=1.0, hbar=1.0):
        values = [float(g), float(mu_B), float(hbar)]
        for name, value in zip(cls._fields, values):
            if not np.isfinite(value) or value == 0.0:
                raise ValueError("`{}` must be finite and non-zero.".format(name))
        return super(physicalconstants, cls).__new__(cls, *values)


class spinobservable(object):
    """
    The observable ``H_A(S) = sum_nu a_nu T_nu(S)`` of a spin ``s``.

    Args:
        basis (multipolebasis): Multipole basis of the spin.
        coeffs (coefficientvector): Coefficients of ``A`` in ``basis``.
        constants (physicalconstants): Physical constants.
    """

    def __init__(self, basis, coeffs, constants):
        if coeffs.spin.N != basis.N:
            raise DimensionError("Coefficients and basis differ in dimension.")
        self.basis = basis
        self.spin = basis.spin
        self.coeffs = coeffs
        self.constants = constants

    @property
    def matrix(self):
        """``H_A(S)`` as a matrix."""
        return reconstruct(self.coeffs, self.basis)

    def __repr__(self):
        return "spinobservable(s={}, a={})".format(self.spin.s, self.coeffs.a)


def to_observable(A, constants=None):
    """
    Interpret ``A`` as an observable of a spin ``s = (N - 1) / 2``.

    Args:
        A (hermitianmatrix or array_like): The matrix.
        constants (optional[physicalconstants]): Physical constants.

    Returns:
        spinobservable: The observable, identical to ``A`` by construction.
    """
    if not isinstance(A, hermitianmatrix):
        A = hermitianmatrix(A)
    constants = physicalconstants() if constants is None else constants
    spin = spinsystem(N=A.dim, hbar=constants.hbar)
    basis = build_basis(spin)
    return spinobservable(basis, decompose(A, basis), constants)


def field_for_spin_half(obs):
    """
    Scalar offset and homogeneous field reproducing a spin-1/2 observable,
    ``a = a_0`` and ``B_0 = -2 / (g mu_B hbar) (a_1, a_2, a_3)``.

    Args:
        obs (spinobservable): A spin-1/2 observable.

    Returns:
        a (float): The offset ``a_0``.
        B0 (ndarray): The field vector.
    """
    if obs.spin.N != 2:
        raise DimensionError("A homogeneous field only describes N = 2; "
                             + "use tuned field profiles for N > 2.")
    g, mu_B, hbar = obs.constants
    a = obs.coeffs.a
    B0 = -2.0 / (g * mu_B * hbar) * a[1:4]
    return float(a[0]), B0


def zeeman_levels(B0, constants):
    """Levels ``E_+/- = +/- (hbar / 2) g mu_B |B_0|`` of ``-g mu_B B_0 . S``."""
    g, mu_B, hbar = constants
    E = 0.5 * hbar * abs(g * mu_B) * np.linalg.norm(B0)
    return E, -E


def shift_relation(E, a):
    """Eigenvalue ``a + E`` of ``A`` from a level ``E`` of its spin part."""
    return a + E


def closed_form_2x2(A):
    """
    Closed-form eigenvalues of a hermitean 2 x 2 matrix
    ``[[alpha, beta*], [beta, gamma]]``.

    Returns:
        A_plus, A_minus (float): Eigenvalues with ``A_plus >= A_minus``.
    """
    if not isinstance(A, hermitianmatrix):
        A = hermitianmatrix(A)
    if A.dim != 2:
        raise DimensionError("Closed form only for 2 x 2 matrices.")
    alpha, gamma = A.entries[0, 0].real, A.entries[1, 1].real
    beta = A.entries[1, 0]
    root = np.sqrt((alpha - gamma)**2 + 4.0 * abs(beta)**2)
    return 0.5 * (alpha + gamma + root), 0.5 * (alpha + gamma - root)
