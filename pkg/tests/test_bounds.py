import numpy as np
import pytest

from geodiscord.bloch import decompose
from geodiscord.bounds import (MeasurementCandidate, a_rows_gram, bounds_report, candidate_measurement,
                               certify_saturation, gd_lower_bound, hadamard_completion, helmert_matrix,
                               isometry_lower_bound, isotropic_gd, measurement_value, min_upper_bound, relaxation,
                               werner_gd)
from geodiscord.config import BoundsSettings, SolverSettings
from geodiscord.errors import BadParameter, InvalidMeasurement
from geodiscord.oracle import oracle_gd
from geodiscord.states import (density_from_pure, make_isotropic, make_werner, maximally_mixed, partial_trace,
                               random_pure, random_state, validate_state)

HADAMARD = BoundsSettings(orthogonal_completion="hadamard")


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_werner_closed_form(m):
    for z in np.linspace(-1, 1, 21):
        b = decompose(make_werner(m, z))
        expected = (m * z - 1) ** 2 / (m * (m - 1) * (m + 1) ** 2)
        assert abs(gd_lower_bound(b) - expected) < 1e-10
        assert abs(min_upper_bound(b) - expected) < 1e-10
        assert abs(werner_gd(m, z) - expected) < 1e-15


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_isotropic_closed_form(m):
    for z in np.linspace(0, 1, 21):
        b = decompose(make_isotropic(m, z))
        expected = (m * m * z - 1) ** 2 / (m * (m - 1) * (m + 1) ** 2)
        assert abs(gd_lower_bound(b) - expected) < 1e-10
        assert abs(min_upper_bound(b) - expected) < 1e-10
        assert abs(isotropic_gd(m, z) - expected) < 1e-15


def test_isotropic_spot_values():
    assert abs(gd_lower_bound(decompose(make_isotropic(2, 1.0))) - 0.5) < 1e-10
    assert abs(gd_lower_bound(decompose(make_isotropic(3, 1.0))) - 2 / 3) < 1e-10
    assert abs(isotropic_gd(3, 1.0) - 2 / 3) < 1e-15
    with pytest.raises(BadParameter):
        werner_gd(2, -1.5)
    with pytest.raises(BadParameter):
        isotropic_gd(1, 0.5)


def test_bell_report(bell):
    report = bounds_report(bell)
    assert abs(report.gd_lower - 0.5) < 1e-12
    assert abs(report.min_upper - 0.5) < 1e-12
    assert report.saturated and report.candidate.valid
    assert abs(report.gd_exact - 0.5) < 1e-12
    assert report.d_equals_n_condition
    assert abs(report.min_exact - 0.5) < 1e-12


def test_product_and_classical_quantum_states():
    rho = np.zeros((6, 6))
    rho[0, 0] = 1.0
    report = bounds_report(validate_state(rho, 2, 3))
    assert report.gd_lower < 1e-12
    assert report.saturated
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    cq = 0.5 * np.kron(np.diag([1.0, 0.0]), np.diag([1.0, 0.0])) + 0.5 * np.kron(np.diag([0.0, 1.0]), np.outer(plus, plus))
    report = bounds_report(validate_state(cq, 2, 2))
    assert report.gd_lower < 1e-12
    assert report.min_upper > 0.01


def test_two_by_n_saturation():
    # 500 seeded states, n in {2, 3, 4}; the oracle runs at its default budget
    for seed in range(500):
        n = 2 + seed % 3
        s = random_state(2, n, 1 + seed % (2 * n), seed=1000 + seed)
        b = decompose(s)
        c = candidate_measurement(relaxation(b))
        assert c.valid()
        assert min(c.min_eigenvalues) >= -1e-9
        assert max(c.idempotency_residuals) <= 1e-8
        lower = gd_lower_bound(b)
        assert abs(measurement_value(s, c) - lower) < 1e-9
        assert certify_saturation(b, c) == pytest.approx(lower, abs=1e-15)
        gap = oracle_gd(s).best_value - lower
        assert -1e-9 <= gap <= 1e-4


def test_pure_state_identity():
    for seed in range(200):
        n = 2 + seed % 3
        psi = random_pure([2, n], seed=seed)
        s = density_from_pure(psi, 2, n)
        b = decompose(s)
        exact = certify_saturation(b, candidate_measurement(relaxation(b)))
        det = 2 * np.linalg.det(partial_trace(s, "A")).real
        assert abs(exact - det) < 1e-9


def test_local_unitary_invariance(local_unitary):
    for seed in range(50):
        m, n = 2 + seed % 2, 2 + (seed // 2) % 2
        s = random_state(m, n, m * n, seed=seed)
        t = local_unitary(s, 100 + seed)
        b0, b1 = decompose(s), decompose(t)
        assert abs(gd_lower_bound(b0) - gd_lower_bound(b1)) < 1e-9
        assert abs(min_upper_bound(b0) - min_upper_bound(b1)) < 1e-9


def test_isometry_bound_is_weaker():
    for seed in range(100):
        m, n = 2 + seed % 2, 2 + seed % 3
        b = decompose(random_state(m, n, 1 + seed % (m * n), seed=seed))
        assert isometry_lower_bound(b) <= gd_lower_bound(b) + 1e-10


def test_helmert_matrix():
    for k in range(1, 7):
        u = helmert_matrix(k)
        assert np.abs(u.T @ u - np.eye(k)).max() < 1e-14
        assert np.abs(u[:, -1] - 1 / np.sqrt(k)).max() < 1e-15
    with pytest.raises(BadParameter):
        helmert_matrix(0)


def test_hadamard_completion():
    for k in [1, 2, 4, 8]:
        h = hadamard_completion(k)
        assert np.abs(h.T @ h - np.eye(k)).max() < 1e-14
        assert np.abs(h[:, -1] - 1 / np.sqrt(k)).max() < 1e-15
    with pytest.raises(BadParameter):
        hadamard_completion(3)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_a_rows_gram(m):
    s = random_state(m, 2, 2 * m, seed=m)
    b = decompose(s)
    expected = np.eye(m - 1) - np.ones((m - 1, m - 1)) / m
    assert np.abs(a_rows_gram(relaxation(b)) - expected).max() < 1e-12
    if m in (3, 5):
        assert np.abs(a_rows_gram(relaxation(b, HADAMARD)) - expected).max() < 1e-12
    else:
        with pytest.raises(BadParameter):
            relaxation(b, HADAMARD)


def test_candidate_trace_and_completeness():
    # completion holds by construction even when the candidate is not projective
    for seed in range(20):
        b = decompose(random_state(3, 3, 9, seed=seed))
        c = candidate_measurement(relaxation(b))
        assert c.trace_one and c.complete


def test_hadamard_candidate_for_qubits():
    s = random_state(2, 3, 6, seed=4)
    b = decompose(s)
    c = candidate_measurement(relaxation(b, HADAMARD))
    assert c.valid()
    assert abs(measurement_value(s, c) - gd_lower_bound(b)) < 1e-9


def test_qutrit_candidate_certification():
    for seed in range(30):
        s = random_state(3, 2, 1 + seed % 6, seed=seed)
        report = bounds_report(s)
        assert report.saturated == report.candidate.valid
        assert report.gd_isometry_lower <= report.gd_lower + 1e-10
        if report.saturated:
            assert abs(report.gd_exact - report.gd_lower) < 1e-12
        else:
            assert report.gd_exact is None


def test_lapack_matches_jacobi():
    lapack = SolverSettings(eigensolver="lapack")
    for seed in range(10):
        s = random_state(3, 3, 9, seed=seed)
        r0 = bounds_report(s)
        r1 = bounds_report(s, solver=lapack)
        assert abs(r0.gd_lower - r1.gd_lower) < 1e-12
        assert abs(r0.min_upper - r1.min_upper) < 1e-12


def test_measurement_value_rejects_invalid(bell):
    ops = np.array([np.eye(3) / 3] * 3)
    with pytest.raises(InvalidMeasurement):
        measurement_value(bell, MeasurementCandidate.from_operators(ops))
    mixed = np.array([np.eye(2) / 2, np.eye(2) / 2])
    c = MeasurementCandidate.from_operators(mixed)
    assert c.idempotent == (False, False)
    assert not c.valid()
    with pytest.raises(InvalidMeasurement):
        measurement_value(bell, c)


def test_measurement_value_computational_basis(bell):
    ops = np.array([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    assert abs(measurement_value(bell, MeasurementCandidate.from_operators(ops)) - 0.5) < 1e-14


@pytest.mark.parametrize("m", [3, 4])
def test_maximally_mixed_candidate_is_computational_basis(m):
    s = maximally_mixed(m, m)
    b = decompose(s)
    c = candidate_measurement(relaxation(b))
    assert c.valid()
    for k in range(m):
        expected = np.zeros((m, m))
        expected[k, k] = 1.0
        assert np.abs(c.operators[k] - expected).max() < 1e-12
    assert abs(measurement_value(s, c)) < 1e-14
    report = bounds_report(s)
    assert report.saturated
    assert abs(report.gd_exact) < 1e-14


@pytest.mark.parametrize("m", [3, 4])
def test_werner_and_isotropic_are_certified(m):
    for z in [-0.5, 0.2, 1.0]:
        report = bounds_report(make_werner(m, z))
        assert report.saturated and report.d_equals_n_condition
        assert abs(report.min_exact - werner_gd(m, z)) < 1e-10
    for z in [0.3, 1.0]:
        report = bounds_report(make_isotropic(m, z))
        assert report.saturated and report.d_equals_n_condition
        assert abs(report.min_exact - isotropic_gd(m, z)) < 1e-10
