import json
import math

import numpy as np
import pytest

from paramlowrank import (
    GridFamily,
    ParamLowRankValueError,
    Printer,
    SweepError,
    align_frames,
    argmin_path,
    best_approximation,
    builtin_family,
    cubic_objective,
    eval_family,
    gap_report,
    sweep_pod,
    sweep_svd,
)
from paramlowrank.families import HEAT3
from paramlowrank.parametric import (
    approximant_increments,
    grid_argmin,
    kkl_path,
    map_grid,
    projector_path,
    reduce_rank,
)

TIE_XI = 2.0 / math.sqrt(3.0)
COARSE_ROT2_GRID = [0.1, 0.55, 1.0]


@pytest.fixture(scope="module")
def diag2():
    return builtin_family("diag2")


@pytest.fixture(scope="module")
def c_grid():
    return np.linspace(-1.0, 1.0, 2001)


def test_eval_family(diag2):
    assert eval_family(diag2, 0.25).tolist() == [[0.25, 0.0], [0.0, 0.75]]


def test_sweep_svd_of_diag2(diag2):
    s = sweep_svd(diag2, np.linspace(0.0, 1.0, 5), 1)
    assert s.kind == "svd"
    assert s.spectra.tolist() == [
        [1.0, 0.0],
        [0.75, 0.25],
        [0.5, 0.5],
        [0.75, 0.25],
        [1.0, 0.0],
    ]
    assert s.gaps.tolist() == [1.0, 0.5, 0.0, 0.5, 1.0]
    assert s.degenerate_xis == [0.5]
    assert s.frames[1].approximant().tolist() == [[0.0, 0.0], [0.0, 0.75]]
    assert s.frames[3].approximant().tolist() == [[0.75, 0.0], [0.0, 0.0]]


def test_sweep_prints_progress(diag2, capture_stdout):
    output = capture_stdout(
        lambda: sweep_svd(diag2, np.linspace(0.0, 1.0, 5), 1, printer=Printer())
    )
    assert "Sweeping SVD over 5 grid points" in output
    assert "Degenerate gaps at xi=[0.5]" in output


def test_sweep_svd_full_rank_has_no_degenerate_gaps(diag2):
    s = sweep_svd(diag2, np.linspace(0.0, 1.0, 5), 2)
    assert not s.degenerate.any()
    assert s.gaps.tolist() == [0.0, 0.25, 0.5, 0.25, 0.0]


def test_sweep_svd_rejects_ensemble_family():
    with pytest.raises(ParamLowRankValueError, match="needs a matrix-valued family"):
        sweep_svd(builtin_family("atoms2"), [0.0, 1.0], 1)


def test_sweep_pod_rejects_matrix_family(diag2):
    with pytest.raises(ParamLowRankValueError, match="needs an ensemble-valued family"):
        sweep_pod(diag2, [0.0, 1.0], 1)


@pytest.mark.parametrize(
    ("n", "match"),
    [(0, "n must be a positive integer"), (3, "n must be between 1 and 2")],
)
def test_sweep_svd_rejects_bad_rank(diag2, n, match):
    with pytest.raises(ParamLowRankValueError, match=match):
        sweep_svd(diag2, [0.0, 1.0], n)


def test_sweep_names_failing_parameter():
    with pytest.raises(SweepError, match="at xi=1.5") as excinfo:
        sweep_svd(builtin_family("rot2"), [0.5, 1.0, 1.5], 1)
    assert excinfo.value.xi == 1.5
    assert isinstance(excinfo.value.__cause__, ParamLowRankValueError)


def test_threaded_sweep_matches_sequential_sweep():
    grid = np.linspace(0.0, 1.0, 21)
    sequential = sweep_svd(HEAT3, grid, 1)
    threaded = sweep_svd(HEAT3, grid, 1, workers=4)
    assert np.array_equal(sequential.spectra, threaded.spectra)
    for first, second in zip(sequential.frames, threaded.frames):
        assert np.array_equal(first.v, second.v)


def test_map_grid_keeps_grid_order():
    assert map_grid(lambda xi: 2.0 * xi, np.array([0.0, 0.5, 1.0]), 3) == [
        0.0,
        1.0,
        2.0,
    ]


def test_projector_jumps_across_crossing(diag2):
    s = sweep_svd(diag2, np.linspace(0.0, 1.0, 6), 1)
    path = projector_path(s)
    assert path.continuity_certified
    assert np.argmax(path.hs_increments) == 2
    assert path.hs_increments[2] == pytest.approx(math.sqrt(2.0))
    assert np.allclose(np.delete(path.hs_increments, 2), 0.0)


def test_projector_path_is_not_certified_at_tie(diag2):
    path = projector_path(sweep_svd(diag2, np.linspace(0.0, 1.0, 5), 1))
    assert not path.continuity_certified
    assert path.degenerate_xis == [0.5]


def test_projector_path_of_smooth_family_is_continuous():
    increments = projector_path(sweep_svd(HEAT3, np.linspace(0.0, 1.0, 41), 1))
    finer = projector_path(sweep_svd(HEAT3, np.linspace(0.0, 1.0, 81), 1))
    assert increments.continuity_certified
    assert finer.hs_increments.max() < increments.hs_increments.max()


def test_projector_path_rejects_non_symmetric_members():
    family = GridFamily([0.0, 1.0], [[[1.0, 1.0], [0.0, 1.0]], np.eye(2)])
    with pytest.raises(ParamLowRankValueError, match="need symmetric members"):
        projector_path(sweep_svd(family, [0.0, 1.0], 1))


def test_projector_path_rejects_indefinite_members():
    family = GridFamily([0.0, 1.0], [np.diag([1.0, -2.0]), np.eye(2)])
    with pytest.raises(ParamLowRankValueError, match="positive semidefinite"):
        projector_path(sweep_svd(family, [0.0, 1.0], 1))


def test_gap_report_finds_crossing(diag2):
    report = gap_report(sweep_svd(diag2, np.linspace(0.0, 1.0, 6), 1))
    assert report.n == 1
    assert report.degenerate_xis == []
    assert len(report.crossings) == 1
    left, right = report.crossings[0]
    assert (left, right) == (pytest.approx(0.4), pytest.approx(0.6))
    assert [row.gap for row in report.rows] == pytest.approx(
        [1.0, 0.6, 0.2, 0.2, 0.6, 1.0]
    )


def test_gap_report_of_smooth_family_has_no_crossings():
    report = gap_report(sweep_svd(HEAT3, np.linspace(0.0, 1.0, 21), 2))
    assert report.crossings == []
    assert min(row.gap for row in report.rows) == pytest.approx(1.0)


@pytest.mark.parametrize(
    ("family_id", "grid", "n"),
    [
        ("rot2", COARSE_ROT2_GRID, 1),
        ("heat3", [0.0, 1.0], 1),
        ("heat3", [0.0, 1.0], 2),
    ],
)
def test_fast_rotation_on_coarse_grid_is_not_a_crossing(family_id, grid, n):
    report = gap_report(sweep_svd(builtin_family(family_id), grid, n))
    assert report.crossings == []
    assert report.degenerate_xis == []


def test_coarse_pod_sweep_has_no_crossings():
    s = sweep_pod(builtin_family("heat3-cloud"), [0.0, 1.0], 1)
    assert gap_report(s).crossings == []


def test_grid_family_turns_cannot_be_refined():
    rot2 = builtin_family("rot2")
    family = GridFamily(COARSE_ROT2_GRID, [rot2(xi) for xi in COARSE_ROT2_GRID])
    report = gap_report(sweep_svd(family, COARSE_ROT2_GRID, 1))
    assert report.crossings == [(0.1, 0.55)]
    assert gap_report(sweep_svd(rot2, COARSE_ROT2_GRID, 1)).crossings == []


def test_gap_report_for_another_rank(diag2):
    s = sweep_svd(diag2, np.linspace(0.0, 1.0, 6), 1)
    report = gap_report(s, 2)
    assert report.n == 2
    assert report.crossings == []


def test_gap_report_rejects_rank_beyond_spectrum(diag2):
    s = sweep_svd(diag2, [0.0, 1.0], 1)
    with pytest.raises(ParamLowRankValueError, match="exceeds the spectrum length"):
        gap_report(s, 3)


def test_gap_report_json(tmp_path, diag2):
    path = tmp_path / "gap.json"
    gap_report(sweep_svd(diag2, np.linspace(0.0, 1.0, 5), 1)).to_json(path)
    with path.open() as fp:
        content = json.load(fp)
    assert content["n"] == 1
    assert [row["degenerate"] for row in content["rows"]] == [
        False,
        False,
        True,
        False,
        False,
    ]


def test_align_frames_keeps_approximants():
    s = sweep_svd(HEAT3, np.linspace(0.0, 1.0, 21), 2)
    aligned = align_frames(s)
    assert aligned.aligned
    assert aligned.alignment_skipped == []
    for before, after in zip(s.frames, aligned.frames):
        assert np.allclose(before.approximant(), after.approximant(), atol=1e-12)
        assert np.allclose(before.projector(), after.projector(), atol=1e-12)


def test_align_frames_moves_frames_like_approximants():
    aligned = align_frames(sweep_svd(HEAT3, np.linspace(0.0, 1.0, 41), 2))
    increments = approximant_increments(aligned)
    for k in range(len(aligned.frames) - 1):
        move = np.linalg.norm(aligned.frames[k + 1].v - aligned.frames[k].v, "fro")
        assert move <= 10.0 * increments[k]


def test_align_frames_skips_orthogonal_steps(diag2):
    aligned = align_frames(sweep_svd(diag2, np.linspace(0.0, 1.0, 6), 1))
    assert aligned.alignment_skipped == [2]
    assert aligned.compile()["alignment_skipped"] == [pytest.approx(0.6)]


def test_sweep_pod_of_atoms2():
    s = sweep_pod(builtin_family("atoms2"), np.linspace(0.0, 1.0, 5), 1)
    assert s.kind == "pod"
    assert s.spectra[:, 0].tolist() == pytest.approx([1.0, 0.75, 0.5, 0.75, 1.0])
    assert s.degenerate_xis == [0.5]
    assert [basis.tail() for basis in s.bases] == pytest.approx(
        [0.0, 0.25, 0.5, 0.25, 0.0]
    )
    with pytest.raises(ParamLowRankValueError, match="no approximant"):
        s.frames[0].approximant()


def test_pod_projector_increments_jump_once():
    s = sweep_pod(builtin_family("atoms2"), np.linspace(0.0, 1.0, 6), 1)
    increments = approximant_increments(s)
    assert increments[2] == pytest.approx(math.sqrt(2.0))
    assert np.allclose(np.delete(increments, 2), 0.0)


def test_kkl_path_of_heat3_cloud():
    grid = np.linspace(0.0, 1.0, 3)
    path = kkl_path(sweep_pod(builtin_family("heat3-cloud"), grid, 2))
    assert path.scales[:, 0] == pytest.approx(3.0 + grid)
    assert path.scales[:, 1] == pytest.approx([2.0, 2.0, 2.0])
    for eta in path.coefficients:
        assert eta.shape == (3, 2)
        gram = eta.T @ eta / 3.0
        assert np.allclose(gram, np.eye(2), atol=1e-10)


def test_kkl_path_names_vanishing_scale():
    s = sweep_pod(builtin_family("atoms2"), np.linspace(0.0, 1.0, 3), 2)
    with pytest.raises(SweepError, match="at xi=0.0") as excinfo:
        kkl_path(s)
    assert excinfo.value.xi == 0.0


def test_kkl_path_rejects_svd_sweep(diag2):
    with pytest.raises(ParamLowRankValueError, match="needs a POD sweep"):
        kkl_path(sweep_svd(diag2, [0.0, 1.0], 1))


def test_grid_argmin_interior_branch(c_grid):
    result = grid_argmin(cubic_objective, c_grid, 1.0)
    assert result.c_star == pytest.approx(1.0 / math.sqrt(3.0), abs=1e-3)
    assert result.value == pytest.approx(-2.0 / (3.0 * math.sqrt(3.0)), abs=1e-6)


def test_grid_argmin_boundary_branch(c_grid):
    result = grid_argmin(cubic_objective, c_grid, 1.8)
    assert (result.c_star, result.index) == (-1.0, 0)
    assert result.value == pytest.approx(1.8 - 1.8**3)


def test_grid_argmin_breaks_ties_by_lowest_index(c_grid):
    assert grid_argmin(cubic_objective, c_grid, TIE_XI).index == 0
    assert grid_argmin(lambda xi, c: c * c, [-1.0, 1.0], 0.0).c_star == -1.0


def test_grid_argmin_rejects_empty_grid():
    with pytest.raises(ParamLowRankValueError, match="c_grid must not be empty"):
        grid_argmin(cubic_objective, [], 1.0)


def test_grid_argmin_rejects_non_finite_objective():
    with pytest.raises(ParamLowRankValueError, match="not finite at c=0.0"):
        grid_argmin(lambda xi, c: math.inf if c == 0.0 else c, [1.0, 0.0], 1.0)


def test_argmin_path_jumps_but_minimum_is_continuous(c_grid):
    path = argmin_path(cubic_objective, c_grid, np.linspace(1.0, 2.0, 101))
    left, right, jump = path.largest_jump()
    assert left <= TIE_XI <= right
    assert jump > 1.4
    assert np.max(np.abs(np.diff(path.values))) <= 0.2


def test_reduce_rank_of_pod_sweep():
    s = align_frames(sweep_pod(builtin_family("heat3-cloud"), [0.0, 0.5, 1.0], 2))
    reduced = reduce_rank(s, 1)
    assert reduced.n == 1
    assert not reduced.aligned
    assert np.array_equal(reduced.spectra, s.spectra)
    assert np.allclose(reduced.gaps, s.spectra[:, 0] - s.spectra[:, 1])
    assert [basis.basis.shape for basis in reduced.bases] == [(3, 1)] * 3
    assert reduced.frames[1].v.shape == (3, 1)
    assert reduced.frames[1].core.shape == (1, 1)


def test_reduce_rank_of_svd_sweep_rebuilds_frames():
    s = sweep_svd(HEAT3, [0.0, 0.5], 2)
    reduced = reduce_rank(align_frames(s), 1)
    expected = best_approximation(HEAT3(0.5), 1).approx
    assert np.allclose(reduced.frames[1].approximant(), expected, atol=1e-12)


def test_reduce_rank_rejects_larger_rank():
    with pytest.raises(ParamLowRankValueError, match="exceeds the sweep rank 1"):
        reduce_rank(sweep_svd(HEAT3, [0.0, 1.0], 1), 2)
