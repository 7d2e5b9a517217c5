from typing import List, Sequence, Union

import numpy as np

from paramlowrank.errors import ParamLowRankValueError
from paramlowrank.types import Vector

MIN_GRID_COUNT = 2


class GridSpec:
    """Parameter grid validation and expansion.

    A grid spec is either the compact form `start:stop:count`, giving `count`
    equispaced points from `start` to `stop` inclusive, or an explicit
    comma-separated list of strictly increasing values.
    """

    def __init__(self, grid_spec: str, /):
        """Initialize a grid spec.

        >>> grid = GridSpec("0:1:5")
        >>> grid.values().tolist()
        [0.0, 0.25, 0.5, 0.75, 1.0]

        Args:
            grid_spec: The grid spec string.

        Raises:
            ParamLowRankValueError: Raised when the grid spec is malformed.
        """
        self.grid_spec = grid_spec.strip()
        self._values = self._parse()

    def __repr__(self) -> str:
        """Return the string representation of the class.

        >>> GridSpec("0:1:11")
        '0:1:11'

        Returns:
            The string representation of the grid spec.
        """
        return repr(self.grid_spec)

    def __str__(self) -> str:
        """Return the grid spec string.

        >>> print(GridSpec("0.1, 0.2, 0.4"))
        0.1, 0.2, 0.4

        Returns:
            The human-readable string representation of the grid spec.
        """
        return self.grid_spec

    def __len__(self) -> int:
        """Return the number of grid points."""
        return len(self._values)

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "GridSpec":
        """Build an explicit grid spec from values.

        Args:
            values: Strictly increasing grid values.

        Returns:
            The grid spec listing the values.
        """
        return cls(", ".join(repr(float(value)) for value in values))

    def _parse(self) -> Vector:
        """Parse the grid spec.

        Raises:
            ParamLowRankValueError: Raised when the compact form does not have
                three fields, a field is not a number, the count is below 2 or
                the explicit values are not strictly increasing.

        Returns:
            The grid values.
        """
        if ":" in self.grid_spec:
            fields = self.grid_spec.split(":")
            if len(fields) != 3:
                raise ParamLowRankValueError(
                    f'Grid spec must look like "start:stop:count", got "{self.grid_spec}"'
                )
            start, stop = _to_float(fields[0]), _to_float(fields[1])
            try:
                count = int(fields[2])
            except ValueError:
                raise ParamLowRankValueError(
                    f'Grid count must be an integer, got "{fields[2]}"'
                )
            if count < MIN_GRID_COUNT:
                raise ParamLowRankValueError(
                    f"Grid count must be at least {MIN_GRID_COUNT}, got {count}"
                )
            if not stop > start:
                raise ParamLowRankValueError("Grid stop must be greater than start")
            return np.linspace(start, stop, count)

        values = np.array([_to_float(field) for field in self.grid_spec.split(",")])
        return validate_grid(values, min_count=1)

    def values(self) -> Vector:
        """Return the grid values.

        Returns:
            A fresh array of the grid values.
        """
        return self._values.copy()


def _to_float(field: str) -> float:
    try:
        value = float(field)
    except ValueError:
        raise ParamLowRankValueError(f'Grid value must be a number, got "{field}"')
    if not np.isfinite(value):
        raise ParamLowRankValueError(f'Grid value must be finite, got "{field}"')
    return value


def validate_grid(
    grid: Union[Sequence[float], Vector], *, min_count: int = MIN_GRID_COUNT
) -> Vector:
    """Check that a parameter grid is finite and strictly increasing.

    >>> validate_grid([0.0, 0.5, 0.5])
    Traceback (most recent call last):
        ...
    paramlowrank.errors.ParamLowRankValueError: Grid must be strictly increasing

    Args:
        grid: The grid values.
        min_count: The minimal number of grid points.

    Raises:
        ParamLowRankValueError: Raised when the grid is too short, not finite,
            or not strictly increasing.

    Returns:
        The grid as a float array.
    """
    values = np.asarray(grid, dtype=float).reshape(-1)
    if len(values) < min_count:
        raise ParamLowRankValueError(
            f"Grid must have at least {min_count} points, got {len(values)}"
        )
    if not np.all(np.isfinite(values)):
        raise ParamLowRankValueError("Grid values must be finite")
    if np.any(np.diff(values) <= 0):
        raise ParamLowRankValueError("Grid must be strictly increasing")
    return values


def grid_list(values: Vector) -> List[float]:
    """Convert grid values to a list of Python floats for JSON output."""
    return [float(value) for value in values]
