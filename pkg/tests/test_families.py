import json

import numpy as np
import pytest

from paramlowrank import (
    ConjugatedSpectrumFamily,
    GridFamily,
    ParamLowRankValueError,
    ShapeMismatchError,
    builtin_family,
    cubic_objective,
    family_from_dict,
    family_from_json,
    load_family,
    write_matrix_csv,
)
from paramlowrank.families import HEAT3, ROT2, cayley
from paramlowrank.stochastic import Ensemble, covariance


@pytest.mark.parametrize(
    ("family_id", "is_matrix", "domain"),
    [
        ("diag2", True, (0.0, 1.0)),
        ("rot2", True, (0.1, 1.0)),
        ("heat3", True, (0.0, 1.0)),
        ("atoms2", False, (0.0, 1.0)),
        ("heat3-cloud", False, (0.0, 1.0)),
    ],
)
def test_builtin_families(family_id, is_matrix, domain):
    family = builtin_family(family_id)
    assert family.is_matrix is is_matrix
    assert family.domain == domain


def test_diag2_members():
    family = builtin_family("diag2")
    assert family(0.25).tolist() == [[0.25, 0.0], [0.0, 0.75]]
    assert family(1.0).tolist() == [[1.0, 0.0], [0.0, 0.0]]


def test_atoms2_members():
    e = builtin_family("atoms2")(0.75)
    assert e.weights.tolist() == [0.75, 0.25]
    assert np.array_equal(e.points, np.eye(2))


def test_family_rejects_parameter_outside_domain():
    with pytest.raises(ParamLowRankValueError, match="outside the family domain"):
        builtin_family("rot2")(0.0)


def test_unknown_builtin_family():
    with pytest.raises(ParamLowRankValueError, match='Unknown family "diag3"'):
        builtin_family("diag3")


def test_builtin_family_takes_no_params():
    with pytest.raises(ParamLowRankValueError, match="takes no params"):
        builtin_family("diag2", {"scale": 2.0})


def test_cayley_is_orthogonal():
    q = cayley(np.array([[0.0, 0.6, 0.3], [-0.6, 0.0, 0.8], [-0.3, -0.8, 0.0]]))
    assert np.allclose(q.T @ q, np.eye(3), atol=1e-14)


@pytest.mark.parametrize("xi", [0.0, 0.3, 1.0])
def test_heat3_spectrum(xi):
    values = np.linalg.eigvalsh(HEAT3(xi))[::-1]
    assert np.allclose(values, [3.0 + xi, 2.0, 1.0 - 0.5 * xi], atol=1e-12)
    assert np.array_equal(HEAT3(xi), HEAT3(xi).T)


def test_conjugated_family_min_gap():
    assert HEAT3.min_gap(1) == pytest.approx(1.0)
    assert HEAT3.min_gap(2) == pytest.approx(1.0)
    assert ROT2.min_gap(1) == pytest.approx(0.2)


def test_conjugated_family_min_gap_sees_crossings():
    family = ConjugatedSpectrumFamily([1.0, 0.0], [-1.0, 1.0], np.zeros((2, 2)))
    assert family.min_gap(1) == pytest.approx(0.0)


def test_conjugated_family_rejects_symmetric_generator():
    with pytest.raises(ParamLowRankValueError, match="skew must be skew-symmetric"):
        ConjugatedSpectrumFamily([1.0, 0.0], [0.0, 0.0], np.eye(2))


def test_conjugated_family_rejects_size_mismatch():
    with pytest.raises(ShapeMismatchError, match="matching size 2"):
        ConjugatedSpectrumFamily([1.0, 0.0], [0.0], np.zeros((2, 2)))


def test_conjugated_family_from_params():
    family = builtin_family(
        "conjugated",
        {"base": [2.0, 1.0], "slope": [0.0, 0.0], "skew": [[0.0, 1.0], [-1.0, 0.0]]},
    )
    assert np.allclose(np.linalg.eigvalsh(family(0.5)), [1.0, 2.0])
    assert family.compile()["id"] == "conjugated"


def test_conjugated_family_needs_params():
    with pytest.raises(ParamLowRankValueError, match="needs param 'skew'"):
        builtin_family("conjugated", {"base": [1.0], "slope": [0.0]})


def test_heat3_cloud_covariance_is_square():
    h = HEAT3(0.4)
    assert np.allclose(covariance(builtin_family("heat3-cloud")(0.4)), h @ h)


def test_grid_family_evaluates_on_grid_only():
    family = GridFamily([0.0, 1.0], [np.eye(2), 2.0 * np.eye(2)])
    assert family(1.0).tolist() == [[2.0, 0.0], [0.0, 2.0]]
    assert family.domain == (0.0, 1.0)
    with pytest.raises(ParamLowRankValueError, match="not on the grid"):
        family(0.5)


def test_grid_family_members_are_copies():
    family = GridFamily([0.0, 1.0], [np.eye(2), np.eye(2)])
    family(0.0)[0, 0] = 7.0
    assert family(0.0)[0, 0] == 1.0


def test_grid_family_rejects_count_mismatch():
    with pytest.raises(ShapeMismatchError, match="Got 1 items for 2 parameter values"):
        GridFamily([0.0, 1.0], [np.eye(2)])


def test_grid_family_rejects_mixed_members():
    with pytest.raises(ParamLowRankValueError, match="all matrices or all ensembles"):
        GridFamily([0.0, 1.0], [np.eye(2), Ensemble.uniform(np.eye(2))])


def test_grid_family_rejects_shape_change():
    with pytest.raises(ShapeMismatchError, match="Grid members differ in shape"):
        GridFamily([0.0, 1.0], [np.eye(2), np.eye(3)])


def test_grid_family_rejects_unsorted_grid():
    with pytest.raises(ParamLowRankValueError, match="strictly increasing"):
        GridFamily([1.0, 0.0], [np.eye(2), np.eye(2)])


def test_family_json_with_csv_members(tmp_path):
    write_matrix_csv(tmp_path / "a0.csv", np.diag([1.0, 2.0]))
    write_matrix_csv(tmp_path / "a1.csv", np.diag([3.0, 4.0]))
    path = tmp_path / "family.json"
    path.write_text(
        json.dumps({"kind": "grid", "xi": [0.0, 0.5], "items": ["a0.csv", "a1.csv"]})
    )
    family = family_from_json(path)
    assert isinstance(family, GridFamily)
    assert family(0.5).tolist() == [[3.0, 0.0], [0.0, 4.0]]
    assert load_family(str(path)).domain == (0.0, 0.5)


def test_grid_family_json_round_trip(tmp_path):
    family = GridFamily(
        [0.0, 1.0],
        [
            Ensemble.uniform([[1.0, 0.0]]),
            Ensemble([[1.0, 0.0], [0.0, 1.0]], [0.5, 0.5]),
        ],
    )
    path = tmp_path / "family.json"
    family.to_json(path)
    loaded = family_from_json(path)
    assert not loaded.is_matrix
    assert loaded(1.0).weights.tolist() == [0.5, 0.5]


def test_analytic_family_json(tmp_path):
    path = tmp_path / "family.json"
    builtin_family("heat3").to_json(path)
    assert np.allclose(family_from_json(path)(0.7), HEAT3(0.7))


@pytest.mark.parametrize(
    ("data", "match"),
    [
        ({"kind": "analytic"}, 'needs "id"'),
        ({"kind": "grid", "xi": [0.0]}, 'needs "xi" and "items"'),
        ({"kind": "table"}, 'must be "analytic" or "grid"'),
    ],
)
def test_family_from_dict_rejects_bad_json(data, match):
    with pytest.raises(ParamLowRankValueError, match=match):
        family_from_dict(data)


def test_family_from_json_rejects_invalid_json(tmp_path):
    path = tmp_path / "family.json"
    path.write_text("{")
    with pytest.raises(ParamLowRankValueError, match="is not valid JSON"):
        family_from_json(path)


def test_load_family_rejects_missing_file(tmp_path):
    with pytest.raises(ParamLowRankValueError, match="neither a builtin family"):
        load_family(str(tmp_path / "missing.json"))


def test_cubic_objective_minimizer():
    c = np.linspace(-1.0, 1.0, 2001)
    values = cubic_objective(1.0, c)
    assert c[np.argmin(values)] == pytest.approx(1.0 / np.sqrt(3.0), abs=1e-3)
    assert cubic_objective(2.0, -1.0) == -6.0
