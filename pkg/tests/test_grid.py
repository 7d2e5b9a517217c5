import numpy as np
import pytest

from paramlowrank import GridSpec, ParamLowRankValueError
from paramlowrank.grid import grid_list, validate_grid


def test_compact_grid_spec():
    grid = GridSpec(" 0:1:11 ")
    assert len(grid) == 11
    assert str(grid) == "0:1:11"
    assert grid.values()[3] == pytest.approx(0.3)


def test_explicit_grid_spec():
    assert GridSpec("0.1, 0.2, 0.4").values().tolist() == [0.1, 0.2, 0.4]


def test_grid_values_are_copies():
    grid = GridSpec("0:1:3")
    grid.values()[0] = 5.0
    assert grid.values()[0] == 0.0


def test_grid_spec_from_values():
    grid = GridSpec.from_values([0.0, 0.25])
    assert str(grid) == "0.0, 0.25"
    assert len(grid) == 2


@pytest.mark.parametrize(
    ("grid_spec", "match"),
    [
        ("0:1", 'Grid spec must look like "start:stop:count"'),
        ("0:1:2:3", 'Grid spec must look like "start:stop:count"'),
        ("0:1:x", "Grid count must be an integer"),
        ("0:1:1", "Grid count must be at least 2"),
        ("1:0:5", "Grid stop must be greater than start"),
        ("a:1:3", "Grid value must be a number"),
        ("0:inf:3", "Grid value must be finite"),
        ("0.5, 0.2", "Grid must be strictly increasing"),
    ],
)
def test_bad_grid_specs(grid_spec, match):
    with pytest.raises(ParamLowRankValueError, match=match):
        GridSpec(grid_spec)


def test_validate_grid_min_count():
    with pytest.raises(ParamLowRankValueError, match="at least 2 points, got 1"):
        validate_grid([0.0])


def test_validate_grid_rejects_nan():
    with pytest.raises(ParamLowRankValueError, match="must be finite"):
        validate_grid([0.0, np.nan])


def test_grid_list():
    values = grid_list(np.array([0.0, 0.5]))
    assert values == [0.0, 0.5]
    assert all(type(value) is float for value in values)
