"""Parameter-dependent matrices and ensembles ξ ↦ A_ξ, ξ ↦ X_ξ."""
from __future__ import annotations

import json
import math
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from paramlowrank.errors import ParamLowRankValueError, ShapeMismatchError
from paramlowrank.grid import grid_list, validate_grid
from paramlowrank.linalg_core import as_matrix, read_matrix_csv
from paramlowrank.stochastic import Ensemble
from paramlowrank.types import Matrix, Objective

Member = Union[Matrix, Ensemble]

MATRIX = "matrix"
ENSEMBLE = "ensemble"


class ParamFamily(ABC):
    """A family of matrices or ensembles indexed by a scalar parameter ξ."""

    kind: str
    value_kind: str

    @property
    @abstractmethod
    def domain(self) -> Tuple[float, float]:
        """The closed parameter interval [ξ_min, ξ_max]."""

    @abstractmethod
    def _member(self, xi: float) -> Member:
        """Build the member at a parameter value inside the domain.

        Args:
            xi: The parameter value.

        Raises:
            NotImplementedError: Raised when child classes do not implement this
                method.
        """
        raise NotImplementedError

    @abstractmethod
    def compile(self) -> Dict[str, Any]:  # noqa: A003
        """Compile the family to its JSON form.

        Raises:
            NotImplementedError: Raised when child classes do not implement this
                method.
        """
        raise NotImplementedError

    def __call__(self, xi: float) -> Member:
        """Evaluate the family at ξ.

        Args:
            xi: The parameter value.

        Raises:
            ParamLowRankValueError: Raised when ξ is outside the domain.

        Returns:
            The member at ξ.
        """
        xi = float(xi)
        low, high = self.domain
        if not low <= xi <= high:
            raise ParamLowRankValueError(
                f"xi={xi!r} is outside the family domain [{low!r}, {high!r}]"
            )
        return self._member(xi)

    @property
    def is_matrix(self) -> bool:
        """Whether members are matrices (as opposed to ensembles)."""
        return self.value_kind == MATRIX

    def to_json(self, filename: Union[str, Path]) -> None:
        """Write the family as JSON.

        Args:
            filename: The name of the file to write the JSON to.
        """
        with Path(filename).open("w", encoding="utf-8") as fp:
            json.dump(self.compile(), fp)


def cayley(skew: Matrix) -> Matrix:
    """Return the Cayley transform (I − S)⁻¹(I + S), orthogonal for skew S."""
    identity = np.eye(skew.shape[0])
    return np.linalg.solve(identity - skew, identity + skew)


class ConjugatedSpectrumFamily(ParamFamily):
    """Symmetric matrices A_ξ = Q(ξ)·diag(λ(ξ))·Q(ξ)ᵀ with controlled eigenvalues.

    The eigenvalues move linearly, λ_i(ξ) = base_i + slope_i·ξ, and the
    eigenvectors rotate smoothly with Q(ξ) the Cayley transform of ξ·K for a
    skew-symmetric K. Spectral gaps are therefore known in closed form.

    >>> family = ConjugatedSpectrumFamily([3.0, 1.0], [0.0, 0.0], [[0.0, 1.0], [-1.0, 0.0]])
    >>> family.min_gap(1)
    2.0
    """

    kind = "analytic"
    value_kind = MATRIX

    def __init__(
        self,
        base: Sequence[float],
        slope: Sequence[float],
        skew: Any,
        *,
        domain: Tuple[float, float] = (0.0, 1.0),
        family_id: str = "conjugated",
    ):
        """Initialize a conjugated-spectrum family.

        Args:
            base: Eigenvalues at ξ = 0.
            slope: Rate of change of every eigenvalue.
            skew: The skew-symmetric generator K of the eigenvector rotation.
            domain: The parameter interval.
            family_id: The family id used in compiled output.

        Raises:
            ShapeMismatchError: Raised when the sizes of base, slope and skew
                disagree.
            ParamLowRankValueError: Raised when skew is not skew-symmetric or
                the domain is empty.
        """
        self.base = np.array(base, dtype=float).reshape(-1)
        self.slope = np.array(slope, dtype=float).reshape(-1)
        self.skew = as_matrix(skew, "skew")
        dim = len(self.base)
        if len(self.slope) != dim or self.skew.shape != (dim, dim):
            raise ShapeMismatchError(
                f"base, slope and skew must have matching size {dim}"
            )
        if float(np.max(np.abs(self.skew + self.skew.T))) > 1e-12:
            raise ParamLowRankValueError("skew must be skew-symmetric")
        if not domain[0] < domain[1]:
            raise ParamLowRankValueError(f"Domain must be an interval, got {domain}")
        self._domain = (float(domain[0]), float(domain[1]))
        self.family_id = family_id

    @property
    def domain(self) -> Tuple[float, float]:
        """The parameter interval."""
        return self._domain

    def eigenvalues(self, xi: float) -> np.ndarray:
        """Return the eigenvalues at ξ in the stored (unsorted) order."""
        return self.base + self.slope * xi

    def min_gap(self, n: int) -> float:
        """Return the smallest λ_n − λ_{n+1} over the domain.

        Sorted eigenvalues are piecewise linear in ξ, so checking the domain
        endpoints and every pairwise crossing is exact.

        Args:
            n: The rank, 1 ≤ n < dim.

        Returns:
            The minimum gap of the sorted spectrum.
        """
        low, high = self.domain
        candidates = {low, high}
        for i in range(len(self.base)):
            for j in range(i + 1, len(self.base)):
                if (rate := self.slope[i] - self.slope[j]) != 0:
                    crossing = (self.base[j] - self.base[i]) / rate
                    if low < crossing < high:
                        candidates.add(float(crossing))
        gaps = []
        for xi in sorted(candidates):
            values = np.sort(self.eigenvalues(xi))[::-1]
            gaps.append(float(values[n - 1] - values[n]))
        return min(gaps)

    def _member(self, xi: float) -> Matrix:
        q = cayley(xi * self.skew)
        a = (q * self.eigenvalues(xi)) @ q.T
        return 0.5 * (a + a.T)

    def compile(self) -> Dict[str, Any]:  # noqa: A003
        """Compile the family to its JSON form.

        Named builtins compile to their id alone.

        Returns:
            The analytic-family JSON dictionary.
        """
        if self.family_id != "conjugated":
            return {"kind": self.kind, "id": self.family_id, "params": {}}
        return {
            "kind": self.kind,
            "id": self.family_id,
            "params": {
                "base": self.base.tolist(),
                "slope": self.slope.tolist(),
                "skew": self.skew.tolist(),
                "domain": list(self.domain),
            },
        }


class AnalyticFamily(ParamFamily):
    """A builtin family given by a closed-form member function."""

    kind = "analytic"

    def __init__(
        self,
        family_id: str,
        member: Callable[[float], Member],
        *,
        domain: Tuple[float, float],
        value_kind: str,
    ):
        """Initialize an analytic family.

        Args:
            family_id: The builtin id.
            member: Closed form ξ ↦ member.
            domain: The parameter interval.
            value_kind: Either "matrix" or "ensemble".
        """
        self.family_id = family_id
        self.member = member
        self._domain = domain
        self.value_kind = value_kind

    def __repr__(self) -> str:
        """Return the string representation of the family.

        >>> builtin_family("diag2")
        AnalyticFamily('diag2', domain=(0.0, 1.0))

        Returns:
            String representation of the family.
        """
        return f"{self.__class__.__name__}({self.family_id!r}, domain={self.domain})"

    @property
    def domain(self) -> Tuple[float, float]:
        """The parameter interval."""
        return self._domain

    def _member(self, xi: float) -> Member:
        return self.member(xi)

    def compile(self) -> Dict[str, Any]:  # noqa: A003
        """Compile the family to its JSON form.

        Returns:
            The analytic-family JSON dictionary.
        """
        return {"kind": self.kind, "id": self.family_id, "params": {}}


class GridFamily(ParamFamily):
    """A family known only at the points of a parameter grid.

    Evaluation requires ξ to be one of the grid values exactly; interpolating
    between members is the job of a surrogate.
    """

    kind = "grid"

    def __init__(self, xi: Sequence[float], items: Sequence[Any]):
        """Initialize a grid family.

        Args:
            xi: Strictly increasing parameter values.
            items: One matrix or ensemble per parameter value.

        Raises:
            ShapeMismatchError: Raised when the number of items differs from
                the number of parameter values, or members differ in shape.
            ParamLowRankValueError: Raised when matrices and ensembles are mixed.
        """
        self.xi = validate_grid(xi, min_count=1)
        if len(items) != len(self.xi):
            raise ShapeMismatchError(
                f"Got {len(items)} items for {len(self.xi)} parameter values"
            )
        kinds = {isinstance(item, Ensemble) for item in items}
        if len(kinds) != 1:
            raise ParamLowRankValueError(
                "Grid items must be all matrices or all ensembles"
            )
        self.value_kind = ENSEMBLE if kinds.pop() else MATRIX

        self.items: List[Member] = (
            list(items)
            if self.value_kind == ENSEMBLE
            else [as_matrix(item, f"items[{k}]") for k, item in enumerate(items)]
        )
        shapes = {self._shape(item) for item in self.items}
        if len(shapes) != 1:
            raise ShapeMismatchError(f"Grid members differ in shape: {sorted(shapes)}")

    @staticmethod
    def _shape(item: Member) -> Tuple[int, ...]:
        return (item.dim,) if isinstance(item, Ensemble) else item.shape

    @property
    def domain(self) -> Tuple[float, float]:
        """The smallest and largest grid value."""
        return float(self.xi[0]), float(self.xi[-1])

    def _member(self, xi: float) -> Member:
        matches = np.flatnonzero(self.xi == xi)
        if not len(matches):
            raise ParamLowRankValueError(
                f"xi={xi!r} is not on the grid of this family, use a surrogate to interpolate"
            )
        item = self.items[int(matches[0])]
        return item if isinstance(item, Ensemble) else item.copy()

    def compile(self) -> Dict[str, Any]:  # noqa: A003
        """Compile the family with inline members.

        Returns:
            The grid-family JSON dictionary.
        """
        return {
            "kind": self.kind,
            "xi": grid_list(self.xi),
            "items": [
                item.compile() if isinstance(item, Ensemble) else item.tolist()
                for item in self.items
            ],
        }


def cubic_objective(xi: float, c: float) -> float:
    """Return J(ξ, c) = (ξc)³ − ξc.

    On c ∈ [−1, 1] its minimizer is 1/(√3ξ) for ξ below 2/√3 and −1 above.

    >>> cubic_objective(1.0, 1.0)
    0.0
    >>> cubic_objective(2.0, -1.0)
    -6.0
    """
    t = xi * c
    return t * t * t - t


def _diag2(xi: float) -> Matrix:
    return np.array([[xi, 0.0], [0.0, 1.0 - xi]])


def _atoms2(xi: float) -> Ensemble:
    return Ensemble(np.eye(2), [xi, 1.0 - xi])


HEAT3 = ConjugatedSpectrumFamily(
    [3.0, 2.0, 1.0],
    [1.0, 0.0, -0.5],
    [[0.0, 0.6, 0.3], [-0.6, 0.0, 0.8], [-0.3, -0.8, 0.0]],
    family_id="heat3",
)
ROT2 = ConjugatedSpectrumFamily(
    [1.0, 1.0],
    [1.0, -1.0],
    [[0.0, -1.0], [1.0, 0.0]],
    domain=(0.1, 1.0),
    family_id="rot2",
)


def _heat3_cloud(xi: float) -> Ensemble:
    # Rows of √3·H with weight 1/3 each give covariance H·Hᵀ = H².
    return Ensemble.uniform(math.sqrt(3.0) * HEAT3(xi))


_BUILTINS: Dict[str, Callable[[], ParamFamily]] = {
    "diag2": lambda: AnalyticFamily(
        "diag2", _diag2, domain=(0.0, 1.0), value_kind=MATRIX
    ),
    "rot2": lambda: ROT2,
    "heat3": lambda: HEAT3,
    "atoms2": lambda: AnalyticFamily(
        "atoms2", _atoms2, domain=(0.0, 1.0), value_kind=ENSEMBLE
    ),
    "heat3-cloud": lambda: AnalyticFamily(
        "heat3-cloud", _heat3_cloud, domain=HEAT3.domain, value_kind=ENSEMBLE
    ),
}

BUILTIN_OBJECTIVES: Dict[str, Objective] = {"cubic-argmin": cubic_objective}


def builtin_family(
    family_id: str, params: Optional[Dict[str, Any]] = None
) -> ParamFamily:
    """Look up a builtin family by id.

    Builtins are "diag2", "rot2", "heat3" (matrices), "atoms2" and
    "heat3-cloud" (ensembles). The id "conjugated" builds a
    ConjugatedSpectrumFamily from params "base", "slope", "skew" and
    optionally "domain".

    Args:
        family_id: The family id.
        params: Shape parameters, only used by "conjugated".

    Raises:
        ParamLowRankValueError: Raised when the id is unknown or params are
            given to a family without parameters.

    Returns:
        The family.
    """
    params = params or {}
    if family_id == "conjugated":
        try:
            return ConjugatedSpectrumFamily(
                params["base"],
                params["slope"],
                params["skew"],
                domain=tuple(params.get("domain", (0.0, 1.0))),  # type: ignore
            )
        except KeyError as exc:
            raise ParamLowRankValueError(f"conjugated family needs param {exc}")
    if family_id not in _BUILTINS:
        raise ParamLowRankValueError(
            f'Unknown family "{family_id}", expected one of {sorted(_BUILTINS)} or "conjugated"'
        )
    if params:
        raise ParamLowRankValueError(f'Family "{family_id}" takes no params')
    return _BUILTINS[family_id]()


def _load_item(item: Any, base_dir: Path) -> Member:
    if isinstance(item, str):
        return read_matrix_csv(base_dir / item)
    if isinstance(item, dict):
        return Ensemble.from_dict(item)
    return as_matrix(item, "item")


def family_from_dict(
    data: Dict[str, Any], base_dir: Union[str, Path] = "."
) -> ParamFamily:
    """Build a family from its JSON form.

    >>> family_from_dict({"kind": "analytic", "id": "diag2"})(0.3).tolist()
    [[0.3, 0.0], [0.0, 0.7]]

    Args:
        data: Either {"kind": "analytic", "id": ..., "params": {...}} or
            {"kind": "grid", "xi": [...], "items": [...]}, where grid items are
            CSV paths, inline rows, or ensemble objects.
        base_dir: Directory that relative CSV paths are resolved against.

    Raises:
        ParamLowRankValueError: Raised when the kind is unknown or keys are
            missing.

    Returns:
        The family.
    """
    kind = data.get("kind") if isinstance(data, dict) else None
    if kind == "analytic":
        if "id" not in data:
            raise ParamLowRankValueError('Analytic family JSON needs "id"')
        return builtin_family(data["id"], data.get("params"))
    if kind == "grid":
        if "xi" not in data or "items" not in data:
            raise ParamLowRankValueError('Grid family JSON needs "xi" and "items"')
        return GridFamily(
            data["xi"], [_load_item(item, Path(base_dir)) for item in data["items"]]
        )
    raise ParamLowRankValueError(
        f'Family kind must be "analytic" or "grid", got {kind!r}'
    )


def family_from_json(filename: Union[str, Path]) -> ParamFamily:
    """Read a family from a JSON file.

    Args:
        filename: The JSON file.

    Raises:
        ParamLowRankValueError: Raised when the file is not valid JSON.

    Returns:
        The family.
    """
    path = Path(filename)
    with path.open(encoding="utf-8") as fp:
        try:
            data = json.load(fp)
        except json.JSONDecodeError as exc:
            raise ParamLowRankValueError(f"{path} is not valid JSON: {exc}")
    return family_from_dict(data, base_dir=path.parent)


def load_family(name_or_path: str) -> ParamFamily:
    """Resolve a builtin family id or read a family JSON file.

    Args:
        name_or_path: A builtin id or a path to family JSON.

    Raises:
        ParamLowRankValueError: Raised when the name is neither a builtin nor a
            file.

    Returns:
        The family.
    """
    if name_or_path in _BUILTINS:
        return builtin_family(name_or_path)
    path = Path(name_or_path)
    if not path.is_file():
        raise ParamLowRankValueError(
            f'"{name_or_path}" is neither a builtin family nor a readable file'
        )
    return family_from_json(path)
