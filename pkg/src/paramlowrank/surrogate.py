"""Interpolating surrogates of the optimal maps ξ ↦ P_ξ and ξ ↦ (U_n, Σ_n, V_n).

A surrogate is trained on a sweep whose gap never closes. Between training
points it interpolates linearly and maps the result back onto the feasible
set: rank-n orthogonal projectors through their top-n spectral projector,
orthonormal frames through the polar factor.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from paramlowrank.errors import (
    DegenerateGapError,
    ParamLowRankValueError,
    ShapeMismatchError,
)
from paramlowrank.families import ParamFamily
from paramlowrank.grid import grid_list, validate_grid
from paramlowrank.linalg_core import (
    as_matrix,
    frobenius_norm,
    nearest_orthonormal,
    operator_norm,
    orthonormality_defect,
    svd,
    sym_eig,
)
from paramlowrank.parametric import (
    POD,
    SVD,
    Frame,
    SweepResult,
    align_frames,
    map_grid,
    projector_path,
    reduce_rank,
)
from paramlowrank.stochastic import Ensemble, covariance, projection_error
from paramlowrank.types import Matrix, Vector

PROJECTOR = "projector"
FACTORS = "factors"
DEFAULT_RETRACTION_TOL = 1e-10
MODEL_TOL = 1e-8


@dataclass(frozen=True)
class SurrogateModel:
    """A surrogate trained on a parameter grid.

    `target` is "projector" (stores P_ξ) or "factors" (stores aligned frames);
    `source` is the sweep kind it was trained on, "svd" or "pod".
    Stored projectors must be rank-n orthogonal projectors and stored frames
    orthonormal, both up to MODEL_TOL; construction checks this.
    """

    target: str
    source: str
    n: int
    train_grid: Vector
    projectors: List[Matrix] = field(default_factory=list)
    frames: List[Frame] = field(default_factory=list)
    retraction_tol: float = DEFAULT_RETRACTION_TOL

    def __post_init__(self) -> None:
        grid = validate_grid(self.train_grid)
        object.__setattr__(self, "train_grid", grid)
        if self.target not in (PROJECTOR, FACTORS):
            raise ParamLowRankValueError(
                f'Surrogate target must be "{PROJECTOR}" or "{FACTORS}", got {self.target!r}'
            )
        if self.source not in (SVD, POD):
            raise ParamLowRankValueError(f"Unknown sweep kind {self.source!r}")
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ParamLowRankValueError(
                f"n must be a positive integer, got {self.n!r}"
            )
        stored = self.projectors if self.target == PROJECTOR else self.frames
        if len(stored) != len(grid):
            raise ShapeMismatchError(
                f"Surrogate stores {len(stored)} items for {len(grid)} training points"
            )
        if self.target == PROJECTOR:
            self._check_projectors()
        else:
            self._check_frames()

    def _check_projectors(self) -> None:
        dim = self.projectors[0].shape[0]
        for xi, p in zip(self.train_grid, self.projectors):
            if p.shape != (dim, dim):
                raise ShapeMismatchError(
                    f"Stored projector at xi={float(xi)!r} must be {dim}x{dim}, "
                    f"got {p.shape}"
                )
            defect = max(
                float(np.max(np.abs(p - p.T))),
                float(np.max(np.abs(p @ p - p))),
                abs(float(np.trace(p)) - self.n),
            )
            if defect > MODEL_TOL:
                raise ParamLowRankValueError(
                    f"Stored matrix at xi={float(xi)!r} is not a rank-{self.n} "
                    f"orthogonal projector: defect {defect:.3e}"
                )

    def _check_frames(self) -> None:
        rows = {len(frame.v) for frame in self.frames}
        for xi, frame in zip(self.train_grid, self.frames):
            where = f"Stored frame at xi={float(xi)!r}"
            if (frame.u is None) != (self.source == POD):
                raise ParamLowRankValueError(
                    f"{where} must {'not ' if self.source == POD else ''}"
                    f"carry U for a {self.source} model"
                )
            factors = [frame.v] if frame.u is None else [frame.u, frame.v]
            if (
                len(rows) != 1
                or frame.core.shape != (self.n, self.n)
                or any(factor.shape[1:] != (self.n,) for factor in factors)
            ):
                raise ShapeMismatchError(
                    f"{where} needs {self.n} columns, an {self.n}x{self.n} core "
                    "and the same V rows as the other frames"
                )
            defect = max(orthonormality_defect(factor) for factor in factors)
            if defect > MODEL_TOL:
                raise ParamLowRankValueError(
                    f"{where} is not orthonormal: defect {defect:.3e}"
                )

    @property
    def dim(self) -> int:
        """Dimension of the space the projectors (or V frames) act on."""
        if self.target == PROJECTOR:
            return int(self.projectors[0].shape[0])
        return int(self.frames[0].v.shape[0])

    def compile(self) -> Dict[str, Any]:  # noqa: A003
        """Compile the model to a JSON-ready dictionary.

        Returns:
            The target, training grid and stored matrices (row-major).
        """
        compiled: Dict[str, Any] = {
            "target": self.target,
            "source": self.source,
            "n": self.n,
            "train_grid": grid_list(self.train_grid),
            "retraction_tol": self.retraction_tol,
        }
        if self.target == PROJECTOR:
            compiled["projectors"] = [
                projector.tolist() for projector in self.projectors
            ]
        else:
            compiled["frames"] = [
                {
                    "u": None if frame.u is None else frame.u.tolist(),
                    "core": frame.core.tolist(),
                    "v": frame.v.tolist(),
                }
                for frame in self.frames
            ]
        return compiled

    def to_json(self, filename: Union[str, Path]) -> None:
        """Write the model as JSON.

        Args:
            filename: The name of the file to write the JSON to.
        """
        with Path(filename).open("w", encoding="utf-8") as fp:
            json.dump(self.compile(), fp)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> SurrogateModel:
        """Rebuild a model from its compiled form.

        Args:
            data: The compiled model.

        Raises:
            ParamLowRankValueError: Raised when a key is missing or the stored
                matrices are not projectors (resp. orthonormal frames).

        Returns:
            The model.
        """
        try:
            target = data["target"]
            projectors = [as_matrix(p, "projector") for p in data.get("projectors", [])]
            frames = [
                Frame(
                    u=None if frame["u"] is None else as_matrix(frame["u"], "u"),
                    core=as_matrix(frame["core"], "core"),
                    v=as_matrix(frame["v"], "v"),
                )
                for frame in data.get("frames", [])
            ]
            return cls(
                target=target,
                source=data["source"],
                n=int(data["n"]),
                train_grid=np.array(data["train_grid"], dtype=float),
                projectors=projectors,
                frames=frames,
                retraction_tol=float(
                    data.get("retraction_tol", DEFAULT_RETRACTION_TOL)
                ),
            )
        except (KeyError, TypeError) as exc:
            raise ParamLowRankValueError(f"Malformed surrogate model: missing {exc}")

    @classmethod
    def from_json(cls, filename: Union[str, Path]) -> SurrogateModel:
        """Read a model from a JSON file.

        Args:
            filename: The JSON file.

        Returns:
            The model.
        """
        with Path(filename).open(encoding="utf-8") as fp:
            return cls.from_dict(json.load(fp))


@dataclass(frozen=True)
class CertRow:
    """Achieved against optimal error at one test point.

    For matrix families `achieved`/`optimal` are operator-norm errors and the
    `_hs` fields the Hilbert-Schmidt ones; for ensembles they are root mean
    square projection errors and the `_hs` fields are None.
    """

    xi: float
    achieved: float
    optimal: float
    excess: float
    achieved_hs: Optional[float] = None
    optimal_hs: Optional[float] = None


@dataclass(frozen=True)
class CertReport:
    """Certificate that a surrogate is within ε of the optimum on a test grid."""

    rows: List[CertRow]
    epsilon: float

    @property
    def max_excess(self) -> float:
        """Largest excess over the test grid."""
        return max(row.excess for row in self.rows)

    @property
    def min_excess(self) -> float:
        """Smallest excess, never below −1e-10 up to round-off."""
        return min(row.excess for row in self.rows)

    @property
    def passed(self) -> bool:
        """Whether max_excess < epsilon."""
        return self.max_excess < self.epsilon

    def integral_errors(self) -> Dict[str, float]:
        """Root mean square achieved and optimal errors over the test grid.

        Returns:
            The integral errors keyed "achieved" and "optimal".
        """
        achieved = np.array([row.achieved for row in self.rows])
        optimal = np.array([row.optimal for row in self.rows])
        return {
            "achieved": float(np.sqrt(np.mean(achieved * achieved))),
            "optimal": float(np.sqrt(np.mean(optimal * optimal))),
        }

    def compile(self) -> Dict[str, Any]:  # noqa: A003
        """Compile the report to a JSON-ready dictionary.

        Returns:
            The per-point rows and the summary fields.
        """
        return {
            "epsilon": self.epsilon,
            "max_excess": self.max_excess,
            "min_excess": self.min_excess,
            "pass": self.passed,
            "integral_errors": self.integral_errors(),
            "rows": [
                {
                    "xi": row.xi,
                    "achieved": row.achieved,
                    "optimal": row.optimal,
                    "excess": row.excess,
                    "achieved_hs": row.achieved_hs,
                    "optimal_hs": row.optimal_hs,
                }
                for row in self.rows
            ],
        }

    def to_json(self, filename: Union[str, Path]) -> None:
        """Write the report as JSON.

        Args:
            filename: The name of the file to write the JSON to.
        """
        with Path(filename).open("w", encoding="utf-8") as fp:
            json.dump(self.compile(), fp)


def fit_projector(
    s: SweepResult,
    n: Optional[int] = None,
    *,
    retraction_tol: float = DEFAULT_RETRACTION_TOL,
) -> SurrogateModel:
    """Fit a projector surrogate on a sweep with an open gap everywhere.

    Args:
        s: A POD sweep or an SVD sweep of symmetric positive semidefinite
            matrices, with at least two grid points.
        n: The rank, defaults to the sweep rank.
        retraction_tol: Smallest acceptable λ_n − λ_{n+1} of an interpolant.

    Raises:
        DegenerateGapError: Raised when some training point has a degenerate
            gap, listing those points.

    Returns:
        The model storing the projector path.
    """
    path = projector_path(s, n)
    if not path.continuity_certified:
        raise DegenerateGapError(
            f"Projector path is not continuous, the rank-{path.n} gap closes at "
            f"xi={path.degenerate_xis}",
            xis=path.degenerate_xis,
        )
    return SurrogateModel(
        target=PROJECTOR,
        source=s.kind,
        n=path.n,
        train_grid=path.grid,
        projectors=path.projectors,
        retraction_tol=retraction_tol,
    )


def fit_factors(s: SweepResult, n: Optional[int] = None) -> SurrogateModel:
    """Fit a factor surrogate on an aligned sweep with an open gap everywhere.

    A rank below the sweep rank is fitted on the leading n columns of the
    per-point decompositions, aligned afresh.

    Args:
        s: A sweep passed through `align_frames`, with at least two grid
            points.
        n: The rank, 1 ≤ n ≤ s.n, defaults to the sweep rank.

    Raises:
        ParamLowRankValueError: Raised when the frames are not aligned, an
            alignment step was skipped or n is out of range.
        DegenerateGapError: Raised when some training point has a degenerate
            gap, listing those points.

    Returns:
        The model storing the aligned frames.
    """
    if not s.aligned:
        raise ParamLowRankValueError(
            "fit_factors needs frames aligned with align_frames"
        )
    if n is not None and n != s.n:
        s = align_frames(reduce_rank(s, n))
    if s.alignment_skipped:
        skipped = [float(s.grid[k + 1]) for k in s.alignment_skipped]
        raise ParamLowRankValueError(f"Frame alignment was skipped at xi={skipped}")
    if s.degenerate.any():
        raise DegenerateGapError(
            f"The rank-{s.n} gap closes at xi={s.degenerate_xis}",
            xis=s.degenerate_xis,
        )
    return SurrogateModel(
        target=FACTORS,
        source=s.kind,
        n=s.n,
        train_grid=s.grid.copy(),
        frames=list(s.frames),
    )


def _bracket(m: SurrogateModel, xi: float) -> Union[int, tuple]:
    # Returns the training index when ξ is a training point, else (k, t) with
    # ξ = (1 − t)·ξ_k + t·ξ_{k+1}.
    grid = m.train_grid
    if not grid[0] <= xi <= grid[-1]:
        raise ParamLowRankValueError(
            f"xi={xi!r} is outside the training range [{grid[0]!r}, {grid[-1]!r}], "
            "surrogates do not extrapolate"
        )
    k = int(np.searchsorted(grid, xi))
    if grid[k] == xi:
        return k
    return k - 1, (xi - grid[k - 1]) / (grid[k] - grid[k - 1])


def retract(
    m: Matrix, n: int, *, retraction_tol: float = DEFAULT_RETRACTION_TOL
) -> Matrix:
    """Map a symmetric matrix to its top-n spectral projector.

    This is the nearest rank-n orthogonal projector in HS norm whenever
    λ_n > λ_{n+1}.

    >>> float(np.trace(retract(np.diag([0.9, 0.1]), 1)))
    1.0

    Args:
        m: A symmetric matrix.
        n: The rank.
        retraction_tol: Smallest acceptable λ_n − λ_{n+1}.

    Raises:
        DegenerateGapError: Raised when λ_n − λ_{n+1} ≤ retraction_tol.

    Returns:
        The projector.
    """
    symmetric = 0.5 * (m + m.T)
    eig = sym_eig(symmetric)
    if n < len(eig.values) and eig.values[n - 1] - eig.values[n] <= retraction_tol:
        raise DegenerateGapError(
            f"Retraction tie: λ_{n} − λ_{n + 1} = "
            f"{float(eig.values[n - 1] - eig.values[n])!r}"
        )
    v = eig.vectors[:, :n]
    projector = v @ v.T
    return 0.5 * (projector + projector.T)


def eval_projector(m: SurrogateModel, xi: float) -> Matrix:
    """Evaluate a projector surrogate.

    Args:
        m: A model with target "projector".
        xi: A parameter value inside the training range.

    Raises:
        ParamLowRankValueError: Raised when the model stores factors or ξ is
            outside the training range.
        DegenerateGapError: Raised when the interpolant has no gap at rank n,
            naming ξ.

    Returns:
        A rank-n orthogonal projector.
    """
    if m.target != PROJECTOR:
        raise ParamLowRankValueError(
            "eval_projector needs a projector model, use evaluate"
        )
    xi = float(xi)
    position = _bracket(m, xi)
    if isinstance(position, int):
        return m.projectors[position].copy()
    k, t = position
    blend = (1.0 - t) * m.projectors[k] + t * m.projectors[k + 1]
    try:
        return retract(blend, m.n, retraction_tol=m.retraction_tol)
    except DegenerateGapError as exc:
        raise DegenerateGapError(f"at xi={xi!r}: {exc}", xis=[xi]) from exc


def eval_factors(m: SurrogateModel, xi: float) -> Frame:
    """Evaluate a factor surrogate.

    U and V are interpolated linearly and re-orthonormalized by their polar
    factor; the n×n core is interpolated linearly. After alignment the core
    is Qᵀ·Σ·Q, in general not diagonal.

    Args:
        m: A model with target "factors".
        xi: A parameter value inside the training range.

    Raises:
        ParamLowRankValueError: Raised when the model stores projectors or ξ is
            outside the training range.

    Returns:
        The surrogate frame at ξ.
    """
    if m.target != FACTORS:
        raise ParamLowRankValueError("eval_factors needs a factor model, use evaluate")
    position = _bracket(m, float(xi))
    if isinstance(position, int):
        return m.frames[position]
    k, t = position
    left, right = m.frames[k], m.frames[k + 1]
    u = None
    if left.u is not None and right.u is not None:
        u = nearest_orthonormal((1.0 - t) * left.u + t * right.u)
    return Frame(
        u=u,
        core=(1.0 - t) * left.core + t * right.core,
        v=nearest_orthonormal((1.0 - t) * left.v + t * right.v),
    )


def evaluate(m: SurrogateModel, xi: float) -> Matrix:
    """Evaluate a surrogate to a matrix.

    Args:
        m: The model.
        xi: A parameter value inside the training range.

    Returns:
        The rank-n approximant for factor models trained on matrices, the
        rank-n projector otherwise.
    """
    if m.target == PROJECTOR:
        return eval_projector(m, xi)
    frame = eval_factors(m, xi)
    if m.source == SVD:
        return frame.approximant()
    return frame.projector()


def _check_shapes(m: SurrogateModel, member: Any) -> None:
    if isinstance(member, Ensemble):
        if member.dim != m.dim:
            raise ShapeMismatchError(
                f"Model acts on dimension {m.dim}, family members have {member.dim}"
            )
        return
    if m.target == PROJECTOR or m.source == POD:
        expected = m.dim
        actual = member.shape[0]
    else:
        expected = (m.frames[0].u.shape[0], m.dim)  # type: ignore
        actual = member.shape
    if expected != actual:
        raise ShapeMismatchError(
            f"Model shape {expected} does not match family member shape {member.shape}"
        )


def _certify_point(m: SurrogateModel, f: ParamFamily, xi: float) -> CertRow:
    member = f(xi)
    _check_shapes(m, member)

    if isinstance(member, Ensemble):
        projector = evaluate(m, xi)
        spectrum = np.maximum(sym_eig(covariance(member)).values, 0.0)
        achieved = float(np.sqrt(projection_error(member, projector)))
        optimal = float(np.sqrt(np.sum(spectrum[m.n :])))
        return CertRow(
            xi=xi, achieved=achieved, optimal=optimal, excess=achieved - optimal
        )

    if m.target == PROJECTOR or m.source == POD:
        approx = evaluate(m, xi) @ member
    else:
        approx = evaluate(m, xi)
    residual = member - approx
    sigma = svd(member).sigma
    tail = sigma[m.n :]
    achieved, achieved_hs = operator_norm(residual), frobenius_norm(residual)
    optimal = float(tail[0]) if len(tail) else 0.0
    optimal_hs = float(np.sqrt(np.sum(tail * tail)))
    return CertRow(
        xi=xi,
        achieved=achieved,
        optimal=optimal,
        excess=max(achieved - optimal, achieved_hs - optimal_hs),
        achieved_hs=achieved_hs,
        optimal_hs=optimal_hs,
    )


def certify(
    m: SurrogateModel,
    f: ParamFamily,
    test_grid: Sequence[float],
    epsilon: float,
    *,
    workers: Optional[int] = None,
) -> CertReport:
    """Compare the surrogate against the per-point optimum on a test grid.

    For matrix families the surrogate approximant is Ã(ξ) = Ũ·Σ̃·Ṽᵀ for
    factor models and P̃(ξ)·A_ξ for projector models; its operator and HS
    errors are compared with σ_{n+1}(A_ξ) and √Σ_{i>n}σ_i(A_ξ)². For
    ensemble families the root mean square projection error
    𝔼^½‖X_ξ − P̃(ξ)X_ξ‖² is compared with √Σ_{i>n}λ_i^ξ.

    Args:
        m: The model.
        f: The family the model was trained on.
        test_grid: Parameter values inside the training range.
        epsilon: The target excess.
        workers: Number of threads; points are evaluated sequentially if None.

    Raises:
        ParamLowRankValueError: Raised when epsilon is not positive.

    Returns:
        The certificate, passing iff every excess is below epsilon.
    """
    if not epsilon > 0:
        raise ParamLowRankValueError(f"epsilon must be positive, got {epsilon!r}")
    values = validate_grid(test_grid, min_count=1)
    _check_shapes(m, f(float(values[0])))
    rows = map_grid(lambda xi: _certify_point(m, f, float(xi)), values, workers)
    return CertReport(rows=rows, epsilon=float(epsilon))
