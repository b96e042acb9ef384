import numpy as np
import pytest

from qsgdiag.apparatus import (swiftfield, fieldprofiles, check_maxwell,
                               local_hamiltonian, beam_force, spin_half_levels,
                               exact_spin_half_levels, swift_beam_forces)
from qsgdiag.errors import DimensionError, MaxwellError
from qsgdiag.measurement import oracle_spectrum
from qsgdiag.observable import physicalconstants, to_observable


def test_swift_field_values():
    field = swiftfield([0.0, 0.0, 2.0], [1.0, 0.0, 0.0])
    np.testing.assert_allclose(field(np.zeros(3)), [0.0, 0.0, 2.0])
    np.testing.assert_allclose(field([0.5, 0.0, 0.0]), [0.0, 0.0, 3.0])
    np.testing.assert_allclose(field([0.0, 0.0, 0.5]), [1.0, 0.0, 2.0])


def test_swift_field_rejects_parallel_gradient():
    with pytest.raises(MaxwellError, match="divergence"):
        swiftfield([0.0, 0.0, 1.0], [0.0, 0.1, 1.0])


def test_swift_field_bad_shape():
    with pytest.raises(DimensionError):
        swiftfield([0.0, 1.0], [1.0, 0.0, 0.0])


@pytest.mark.parametrize("B0", [[-2.0, 0.0, 0.0], [0.3, -1.2, 0.7], [0.0, 0.0, 0.0]])
def test_perpendicular(B0):
    field = swiftfield.perpendicular(B0, gradient=2.5)
    assert abs(np.dot(field.k, field.B0)) < 1e-12
    assert np.linalg.norm(field.k) == pytest.approx(2.5)


def test_maxwell_consistent():
    rng = np.random.default_rng(4)
    for _ in range(5):
        field = swiftfield.perpendicular(rng.normal(size=3), rng.uniform(0.1, 2.0))
        report = check_maxwell(field, rng.uniform(-1.0, 1.0, (100, 3)))
        assert report.sample_points.shape == (100, 3)
        assert report.max_div <= 1e-12
        assert report.max_curl <= 1e-12


def test_maxwell_detects_sources():
    report = check_maxwell(lambda r: r, np.zeros((1, 3)))
    assert report.max_div == pytest.approx(3.0)
    assert report.max_curl == pytest.approx(0.0, abs=1e-12)
    report = check_maxwell(lambda r: np.array([-r[1], r[0], 0.0]), np.ones((2, 3)))
    assert report.max_div == pytest.approx(0.0, abs=1e-12)
    assert report.max_curl == pytest.approx(2.0)


def test_profiles_tuned():
    obs = to_observable([[1, -2j], [2j, 3]])
    profiles = fieldprofiles(obs.coeffs)
    np.testing.assert_allclose(profiles(np.zeros(3)), obs.coeffs.a)
    np.testing.assert_allclose(profiles([1.0, 5.0, 5.0]), 2.0 * obs.coeffs.a)
    np.testing.assert_allclose(profiles.derivative(), obs.coeffs.a)
    np.testing.assert_allclose(local_hamiltonian(profiles, obs.basis, np.zeros(3)),
                               [[1, -2j], [2j, 3]], atol=1e-14)
    with pytest.raises(ValueError):
        fieldprofiles(obs.coeffs, gradient_axis=3)


@pytest.mark.parametrize("N", range(2, 9))
def test_beam_force_is_minus_eigenvalue(N, random_hermitian):
    A = random_hermitian(N, seed=20 + N)
    obs = to_observable(A)
    profiles = fieldprofiles(obs.coeffs)
    spec = oracle_spectrum(A)
    for value, vectors in zip(spec.values, spec.vectors):
        force = beam_force(profiles, obs.basis, vectors[:, 0])
        assert abs(force + value) < 1e-9


def test_beam_force_unnormalized():
    obs = to_observable([[2, 1], [1, 2]])
    with pytest.raises(ValueError, match="normalized"):
        beam_force(fieldprofiles(obs.coeffs), obs.basis, [1.0, 1.0])


def test_spin_half_levels_at_centre():
    constants = physicalconstants(g=2.0, mu_B=0.5, hbar=1.0)
    field = swiftfield.perpendicular([0.3, -1.2, 0.7], 1.0)
    E = spin_half_levels(field, np.zeros(3), constants)
    np.testing.assert_allclose(E, exact_spin_half_levels(field, np.zeros(3), constants),
                               atol=1e-14)
    assert E[0] == pytest.approx(0.5 * np.linalg.norm([0.3, -1.2, 0.7]))


def test_spin_half_levels_first_order():
    field = swiftfield.perpendicular([0.0, 0.0, 1.0], 1.0)
    for h in [1e-2, 1e-3]:
        r = h * np.array([0.3, -0.4, 0.5])
        approx = np.array(spin_half_levels(field, r))
        exact = np.array(exact_spin_half_levels(field, r))
        assert np.max(np.abs(approx - exact)) < 10.0 * h**2


@pytest.mark.parametrize("constants", [physicalconstants(),
                                       physicalconstants(-2.0023, 0.5, 0.7)])
def test_swift_forces(constants):
    B0 = np.array([0.3, -1.2, 0.7])
    field = swiftfield.perpendicular(B0, 1.7)
    F_plus, F_minus = swift_beam_forces(field, constants)
    g, mu_B, hbar = constants
    magnitude = 0.5 * hbar * abs(g * mu_B) * np.linalg.norm(B0)
    np.testing.assert_allclose(F_plus, -magnitude * field.k, atol=1e-10)
    np.testing.assert_allclose(F_minus, magnitude * field.k, atol=1e-10)
