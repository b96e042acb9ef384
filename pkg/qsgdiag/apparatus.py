# -*- coding: utf-8 -*-
"""
Models of the (generalized) Stern-Gerlach apparatus.

For a spin-1/2 the apparatus is an inhomogeneous magnetic field equal to
``B_0`` at its centre. For a general spin the field is replaced by spatial
profiles ``Phi_nu(r)`` of the multipole couplings, tuned such that
``Phi_nu(0) = a_nu`` and ``dPhi_nu / dr_1 (0) = a_nu``. Beams in different
eigenstates of ``A`` then feel different forces along ``r_1``.
"""

from collections import namedtuple

import numpy as np
from .errors import DimensionError, MaxwellError
from .jacobi import eigh
from .multipoles import spinsystem, spin_operators
from .observable import physicalconstants

__all__ = ['swiftfield', 'fieldprofiles', 'maxwellreport', 'swift_field_at',
           'check_maxwell', 'local_hamiltonian', 'beam_force',
           'spin_half_levels', 'exact_spin_half_levels', 'swift_beam_forces']


maxwellreport = namedtuple('maxwellreport', ['sample_points', 'max_div',
                                             'max_curl', 'step'])


def _vector(r, name='r'):
    r = np.array(r, dtype=float)
    if r.shape != (3,):
        raise DimensionError("`{}` must have three components.".format(name))
    if not np.all(np.isfinite(r)):
        raise ValueError("`{}` must be finite.".format(name))
    return r


class swiftfield(object):
    """
    The field ``B(r) = (1 + k.r) B_0 + (B_0.r) k``, divergence and curl free
    whenever ``k`` is perpendicular to ``B_0``.

    Args:
        B0 (array_like): Field at the centre of the apparatus.
        k (array_like): Gradient vector [1 / length].
        tol (optional[float]): Relative tolerance on ``k.B_0``.
    """

    tol = 1e-12

    def __init__(self, B0, k, tol=None):
        self.B0 = _vector(B0, 'B0')
        self.k = _vector(k, 'k')
        tol = swiftfield.tol if tol is None else tol
        dot = abs(np.dot(self.k, self.B0))
        if dot > tol * np.linalg.norm(self.k) * np.linalg.norm(self.B0):
            raise MaxwellError("k.B0 = {:.3e} != 0: the field ".format(dot)
                               + "would have divergence 2 k.B0.")
        self.B0.flags.writeable = False
        self.k.flags.writeable = False

    def __call__(self, r):
        return swift_field_at(self, r)

    @classmethod
    def perpendicular(cls, B0, gradient=1.0):
        """
        Build a field with ``|k| = gradient`` and ``k`` perpendicular to
        ``B0``, choosing the coordinate axis least aligned with ``B0``.
        """
        B0 = _vector(B0, 'B0')
        axis = np.zeros(3)
        axis[np.argmin(np.abs(B0))] = 1.0
        norm = np.linalg.norm(B0)
        if norm > 0.0:
            axis = axis - np.dot(axis, B0) / norm**2 * B0
        k = gradient * axis / np.linalg.norm(axis)
        return cls(B0, k)


class fieldprofiles(object):
    """
    Linear multipole profiles ``Phi_nu(r) = a_nu (1 + r_axis)``.

    Args:
        coeffs (coefficientvector): Coefficients ``a_nu`` of the observable.
        gradient_axis (optional[int]): Spatial axis of the tuned gradient,
            ``0`` for ``r_1``.
    """

    def __init__(self, coeffs, gradient_axis=0):
        if gradient_axis not in (0, 1, 2):
            raise ValueError("`gradient_axis` must be 0, 1 or 2.")
        self.coeffs = coeffs
        self.spin = coeffs.spin
        self.gradient_axis = gradient_axis

    def __call__(self, r):
        """Profile values ``Phi_nu(r)``."""
        r = _vector(r)
        return self.coeffs.a * (1.0 + r[self.gradient_axis])

    def derivative(self, r=None):
        """``dPhi_nu / dr_axis``, equal to ``a_nu`` everywhere."""
        return np.array(self.coeffs.a)


def swift_field_at(field, r):
    """Evaluate ``B(r)`` of a :class:`swiftfield`."""
    r = _vector(r)
    return (1.0 + np.dot(field.k, r)) * field.B0 + np.dot(field.B0, r) * field.k


def _jacobian(evaluator, r, h):
    J = np.empty((3, 3))
    for j in range(3):
        dr = np.zeros(3)
        dr[j] = h
        J[:, j] = (np.asarray(evaluator(r + dr)) - np.asarray(evaluator(r - dr))) / (2.0 * h)
    return J


def check_maxwell(evaluator, points, h=0.1):
    """
    Central-difference divergence and curl of a static field.

    Args:
        evaluator (callable): Function returning the field at a point.
        points (array_like): ``[M, 3]`` sample points.
        h (optional[float]): Finite-difference step. Central differences are
            exact for fields at most quadratic in ``r``.

    Returns:
        maxwellreport: Sample points and the largest ``|div B|`` and
        ``|curl B|`` found.
    """
    if h <= 0.0:
        raise ValueError("`h` must be positive.")
    points = np.atleast_2d(np.array(points, dtype=float))
    if points.shape[1] != 3:
        raise DimensionError("`points` must have shape [M, 3].")
    max_div, max_curl = 0.0, 0.0
    for r in points:
        J = _jacobian(evaluator, r, h)
        curl = np.array([J[2, 1] - J[1, 2], J[0, 2] - J[2, 0], J[1, 0] - J[0, 1]])
        max_div = max(max_div, abs(np.trace(J)))
        max_curl = max(max_curl, np.linalg.norm(curl))
    return maxwellreport(points, max_div, max_curl, h)


def local_hamiltonian(profiles, basis, r):
    """
    Position-dependent spin Hamiltonian ``H(r, S) = sum_nu Phi_nu(r) T_nu``.

    Args:
        profiles (fieldprofiles): Tuned profiles.
        basis (multipolebasis): Multipole basis aligned with the profiles.
        r (array_like): Position.

    Returns:
        ndarray: The ``[N, N]`` hermitean matrix.
    """
    if profiles.spin.N != basis.N:
        raise DimensionError("Profiles and basis differ in dimension.")
    return np.einsum('n,nij->ij', profiles(r), basis.elements)


def beam_force(profiles, basis, eigenstate, h=1e-3):
    """
    Force ``F_1 = -d<psi|H(r, S)|psi>/dr_1`` at the centre of the apparatus.

    For an eigenstate ``|A_n>`` of ``A`` this equals ``-A_n``.

    Args:
        profiles (fieldprofiles): Tuned profiles.
        basis (multipolebasis): Multipole basis.
        eigenstate (array_like): Normalized state vector.
        h (optional[float]): Central-difference step.

    Returns:
        float: Force along the tuned gradient axis.
    """
    psi = np.array(eigenstate, dtype=np.complex128)
    if psi.shape != (basis.N,):
        raise DimensionError("State must have {:d} components.".format(basis.N))
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("State must be normalized, |psi| = "
                         + "{:.12f}.".format(np.linalg.norm(psi)))
    if h <= 0.0:
        raise ValueError("`h` must be positive.")
    dr = np.zeros(3)
    dr[profiles.gradient_axis] = h
    energy = [np.vdot(psi, local_hamiltonian(profiles, basis, sign * dr) @ psi).real
              for sign in (1.0, -1.0)]
    return -(energy[0] - energy[1]) / (2.0 * h)


def spin_half_levels(field, r, constants=None):
    """
    Position-dependent levels, to first order in the field gradient,
    ``E_+/-(r) = +/- (hbar / 2) g mu_B (1 + k.r) |B_0|``.

    Returns:
        E_plus, E_minus (float): The two levels.
    """
    constants = physicalconstants() if constants is None else constants
    g, mu_B, hbar = constants
    r = _vector(r)
    E = 0.5 * hbar * abs(g * mu_B) * (1.0 + np.dot(field.k, r)) * np.linalg.norm(field.B0)
    return E, -E


def exact_spin_half_levels(field, r, constants=None):
    """Eigenvalues of ``-g mu_B B(r).S`` obtained by diagonalization."""
    constants = physicalconstants() if constants is None else constants
    g, mu_B, hbar = constants
    S = spin_operators(spinsystem(N=2, hbar=hbar))
    B = swift_field_at(field, r)
    H = -g * mu_B * sum(B[j] * S[j] for j in range(3))
    values = eigh(H)[0]
    return values[1], values[0]


def swift_beam_forces(field, constants=None, h=1e-3):
    """
    Forces ``F_+/- = -grad E_+/-`` on the two spin-1/2 beams at the centre,
    ``-/+ (hbar / 2) g mu_B |B_0| k``.

    Returns:
        F_plus, F_minus (ndarray): Force vectors.
    """
    if h <= 0.0:
        raise ValueError("`h` must be positive.")
    F = np.empty((2, 3))
    for j in range(3):
        dr = np.zeros(3)
        dr[j] = h
        up = spin_half_levels(field, dr, constants)
        down = spin_half_levels(field, -dr, constants)
        F[:, j] = -(np.array(up) - np.array(down)) / (2.0 * h)
    return F[0], F[1]
