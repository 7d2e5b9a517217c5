import json

import numpy as np
import pytest

from paramlowrank import (
    CoupledEnsemble,
    Ensemble,
    ParamLowRankValueError,
    RankDeficiencyError,
    ShapeMismatchError,
    covariance,
    covariance_perturbation,
    kkl_coefficients,
    pod,
    projection_error,
)
from paramlowrank.stochastic import (
    kkl_reconstruct,
    pod_residual,
    projection_error_identity,
)


@pytest.fixture()
def two_atoms():
    return Ensemble([[1.0, 0.0], [0.0, 1.0]], [0.8, 0.2])


@pytest.fixture()
def gaussian_ensemble(rng):
    points = rng.standard_normal((30, 4))
    weights = rng.dirichlet(np.ones(30))
    return Ensemble(points, weights / np.sum(weights))


def test_covariance_of_two_atoms(two_atoms):
    assert covariance(two_atoms).tolist() == [[0.8, 0.0], [0.0, 0.2]]


def test_covariance_trace_is_second_moment(gaussian_ensemble):
    c = covariance(gaussian_ensemble)
    assert np.array_equal(c, c.T)
    assert np.trace(c) == pytest.approx(gaussian_ensemble.second_moment(), rel=1e-12)


def test_uniform_ensemble():
    e = Ensemble.uniform([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0], [7.0, 8.0]])
    assert e.weights.tolist() == [0.25] * 4
    assert e.size == 4


@pytest.mark.parametrize(
    ("weights", "match"),
    [
        ([0.5, 0.6], "Weights must sum to 1"),
        ([1.5, -0.5], "Weights must be nonnegative"),
        ([1.0], "Got 1 weights for 2 points"),
    ],
)
def test_ensemble_rejects_bad_weights(weights, match):
    with pytest.raises(ParamLowRankValueError, match=match):
        Ensemble([[1.0], [2.0]], weights)


def test_ensemble_arrays_are_read_only(two_atoms):
    with pytest.raises(ValueError):
        two_atoms.points[0, 0] = 5.0


def test_ensemble_json_round_trip(tmp_path, two_atoms):
    path = tmp_path / "ensemble.json"
    two_atoms.to_json(path)
    with path.open() as fp:
        assert json.load(fp) == {
            "dim": 2,
            "points": [[1.0, 0.0], [0.0, 1.0]],
            "weights": [0.8, 0.2],
        }
    loaded = Ensemble.from_json(path)
    assert np.array_equal(loaded.points, two_atoms.points)
    assert np.array_equal(loaded.weights, two_atoms.weights)


def test_ensemble_from_dict_checks_dimension():
    with pytest.raises(ShapeMismatchError, match="expected dim=3"):
        Ensemble.from_dict({"dim": 3, "points": [[1.0, 2.0]]})


def test_ensemble_from_dict_needs_points():
    with pytest.raises(ParamLowRankValueError, match='needs "dim" and "points"'):
        Ensemble.from_dict({"dim": 3})


def test_pod_of_two_atoms(two_atoms):
    basis = pod(two_atoms, 1)
    assert basis.eigenvalues.tolist() == pytest.approx([0.8, 0.2])
    assert np.allclose(basis.basis, [[1.0], [0.0]])
    assert basis.tail() == pytest.approx(0.2)
    assert pod_residual(two_atoms, basis) == pytest.approx(0.2)


def test_pod_of_equal_weights_is_degenerate():
    basis = pod(Ensemble([[1.0, 0.0], [0.0, 1.0]], [0.5, 0.5]), 1)
    assert basis.gap_degenerate
    assert basis.tail() == pytest.approx(0.5)
    assert not pod(Ensemble([[1.0, 0.0], [0.0, 1.0]], [0.5, 0.5]), 2).gap_degenerate


@pytest.mark.parametrize("n", [0, 3, 1.0])
def test_pod_rejects_bad_rank(two_atoms, n):
    with pytest.raises(ParamLowRankValueError, match="n must be between 1 and 2"):
        pod(two_atoms, n)


def test_pod_residual_is_eigenvalue_tail(gaussian_ensemble):
    for n in range(1, 5):
        basis = pod(gaussian_ensemble, n)
        assert pod_residual(gaussian_ensemble, basis) == pytest.approx(
            basis.tail(), abs=1e-12
        )


def test_pod_beats_random_projectors(gaussian_ensemble, rng):
    basis = pod(gaussian_ensemble, 2)
    for _ in range(20):
        q, _ = np.linalg.qr(rng.standard_normal((4, 2)))
        assert basis.tail() <= projection_error(gaussian_ensemble, q @ q.T) + 1e-12


def test_projection_error_identity(gaussian_ensemble, rng):
    for _ in range(10):
        q, _ = np.linalg.qr(rng.standard_normal((4, 2)))
        p = q @ q.T
        assert projection_error_identity(gaussian_ensemble, p) == pytest.approx(
            projection_error(gaussian_ensemble, p), abs=1e-10
        )


def test_projection_error_rejects_non_projector(two_atoms):
    with pytest.raises(ParamLowRankValueError, match="p is not idempotent"):
        projection_error(two_atoms, [[2.0, 0.0], [0.0, 0.0]])
    with pytest.raises(ParamLowRankValueError, match="p is not symmetric"):
        projection_error(two_atoms, [[1.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ShapeMismatchError, match="p must be 2x2"):
        projection_error(two_atoms, np.eye(3))


def test_kkl_coefficients_are_white(gaussian_ensemble):
    basis = pod(gaussian_ensemble, 3)
    eta = kkl_coefficients(gaussian_ensemble, basis)
    gram = eta.T @ (eta * gaussian_ensemble.weights[:, np.newaxis])
    assert np.allclose(gram, np.eye(3), atol=1e-10)


def test_kkl_reconstruct_projects_atoms(gaussian_ensemble):
    basis = pod(gaussian_ensemble, 2)
    eta = kkl_coefficients(gaussian_ensemble, basis)
    expected = gaussian_ensemble.points @ basis.projector()
    assert np.allclose(kkl_reconstruct(basis, eta), expected, atol=1e-12)


def test_kkl_reconstruct_with_full_basis_is_exact(gaussian_ensemble):
    basis = pod(gaussian_ensemble, 4)
    eta = kkl_coefficients(gaussian_ensemble, basis)
    assert np.allclose(
        kkl_reconstruct(basis, eta), gaussian_ensemble.points, atol=1e-12
    )


def test_kkl_coefficients_need_nonvanishing_eigenvalues():
    e = Ensemble([[1.0, 0.0], [2.0, 0.0]], [0.5, 0.5])
    with pytest.raises(RankDeficiencyError, match="λ_2") as excinfo:
        kkl_coefficients(e, pod(e, 2))
    assert excinfo.value.index == 2


def test_covariance_perturbation_of_scaled_atom():
    result = covariance_perturbation(CoupledEnsemble([[1.0, 0.0]], [[2.0, 0.0]], [1.0]))
    assert result.lhs == pytest.approx(3.0, abs=1e-12)
    assert result.rhs == pytest.approx(3.0, abs=1e-12)
    assert result.holds


def test_covariance_perturbation_holds_on_random_couplings(rng):
    for _ in range(20):
        first = rng.standard_normal((6, 3))
        second = first + rng.standard_normal((6, 3))
        ce = CoupledEnsemble(first, second, np.full(6, 1.0 / 6.0))
        assert covariance_perturbation(ce).holds


def test_coupled_ensemble_marginals():
    ce = CoupledEnsemble([[1.0], [2.0]], [[3.0], [4.0]], [0.25, 0.75])
    assert ce.first().second_moment() == pytest.approx(3.25)
    assert ce.second().second_moment() == pytest.approx(14.25)


def test_coupled_ensemble_rejects_shape_mismatch():
    with pytest.raises(ShapeMismatchError, match="Coupled points differ in shape"):
        CoupledEnsemble([[1.0, 2.0]], [[1.0]], [1.0])
