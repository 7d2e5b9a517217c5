"""Weighted finite ensembles and their proper orthogonal decomposition.

An ensemble is a random vector X with finite support: atoms x_k in ℝ^N
carrying probabilities w_k. Every expectation is an exact weighted sum, so
the identities of uncentered POD can be checked to round-off.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np

from paramlowrank.errors import (
    NumericalError,
    ParamLowRankValueError,
    RankDeficiencyError,
    ShapeMismatchError,
)
from paramlowrank.linalg_core import (
    DEFAULT_RANK_TOL,
    as_matrix,
    check_finite,
    schatten_norm,
    sym_eig,
)
from paramlowrank.lowrank import DEFAULT_GAP_TOL
from paramlowrank.types import Matrix, Vector

WEIGHT_SUM_TOL = 1e-12
PROJECTOR_TOL = 1e-10
NEGATIVE_EIGENVALUE_TOL = 1e-12


def _check_weights(weights: Any, count: int) -> Vector:
    values = np.array(weights, dtype=float).reshape(-1)
    if len(values) != count:
        raise ShapeMismatchError(f"Got {len(values)} weights for {count} points")
    check_finite(values, "weights")
    if np.any(values < 0):
        raise ParamLowRankValueError("Weights must be nonnegative")
    if abs(float(np.sum(values)) - 1.0) > WEIGHT_SUM_TOL:
        raise ParamLowRankValueError(
            f"Weights must sum to 1, got {float(np.sum(values))!r}"
        )
    return values


@dataclass(frozen=True)
class Ensemble:
    """A random vector with finite support.

    `points` is K×N, one atom per row, and `weights` holds the K probabilities.

    >>> e = Ensemble([[1.0, 0.0], [0.0, 1.0]], [0.8, 0.2])
    >>> e.dim, e.size
    (2, 2)
    >>> e.second_moment()
    1.0
    """

    points: Matrix
    weights: Vector

    def __post_init__(self) -> None:
        points = as_matrix(self.points, "points")
        weights = _check_weights(self.weights, points.shape[0])
        points.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, points: Any) -> Ensemble:
        """Put equal weight on every atom.

        Args:
            points: The atoms, one per row.

        Returns:
            The ensemble.
        """
        matrix = as_matrix(points, "points")
        return cls(matrix, np.full(matrix.shape[0], 1.0 / matrix.shape[0]))

    @property
    def dim(self) -> int:
        """Dimension N of the ambient space."""
        return int(self.points.shape[1])

    @property
    def size(self) -> int:
        """Number K of atoms."""
        return int(self.points.shape[0])

    def second_moment(self) -> float:
        """Return 𝔼‖X‖² = Σ_k w_k ‖x_k‖²."""
        return float(self.weights @ np.sum(self.points * self.points, axis=1))

    def compile(self) -> Dict[str, Any]:  # noqa: A003
        """Compile the ensemble to a JSON-ready dictionary.

        Returns:
            A dictionary with the dimension, points and weights.
        """
        return {
            "dim": self.dim,
            "points": self.points.tolist(),
            "weights": self.weights.tolist(),
        }

    def to_json(self, filename: Union[str, Path]) -> None:
        """Write the ensemble as JSON.

        Args:
            filename: The name of the file to write the JSON to.
        """
        with Path(filename).open("w", encoding="utf-8") as fp:
            json.dump(self.compile(), fp)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> Ensemble:
        """Build an ensemble from its JSON form.

        >>> Ensemble.from_dict({"dim": 2, "points": [[1.0, 0.0], [0.0, 2.0]]}).weights.tolist()
        [0.5, 0.5]

        Args:
            data: A dictionary with "dim", "points" and optionally "weights".
                Missing weights mean uniform weights.

        Raises:
            ParamLowRankValueError: Raised when a key is missing.
            ShapeMismatchError: Raised when the points do not have length "dim".

        Returns:
            The ensemble.
        """
        try:
            dim, points = data["dim"], data["points"]
        except (KeyError, TypeError):
            raise ParamLowRankValueError('Ensemble JSON needs "dim" and "points"')
        matrix = as_matrix(points, "points")
        if matrix.shape[1] != dim:
            raise ShapeMismatchError(
                f"Ensemble points have length {matrix.shape[1]}, expected dim={dim}"
            )
        if (weights := data.get("weights")) is None:
            return cls.uniform(matrix)
        return cls(matrix, weights)

    @classmethod
    def from_json(cls, filename: Union[str, Path]) -> Ensemble:
        """Read an ensemble from a JSON file.

        Args:
            filename: The JSON file.

        Returns:
            The ensemble.
        """
        with Path(filename).open(encoding="utf-8") as fp:
            return cls.from_dict(json.load(fp))


@dataclass(frozen=True)
class CoupledEnsemble:
    """A joint law of two random vectors (Z, Z') on one sample space.

    Atom k is the pair (first[k], second[k]) with probability weights[k].
    """

    first_points: Matrix
    second_points: Matrix
    weights: Vector

    def __post_init__(self) -> None:
        first = as_matrix(self.first_points, "first_points")
        second = as_matrix(self.second_points, "second_points")
        if first.shape != second.shape:
            raise ShapeMismatchError(
                f"Coupled points differ in shape: {first.shape} and {second.shape}"
            )
        weights = _check_weights(self.weights, first.shape[0])
        for name, value in (
            ("first_points", first),
            ("second_points", second),
            ("weights", weights),
        ):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    def first(self) -> Ensemble:
        """Return the law of Z."""
        return Ensemble(self.first_points, self.weights)

    def second(self) -> Ensemble:
        """Return the law of Z'."""
        return Ensemble(self.second_points, self.weights)


@dataclass(frozen=True)
class PodBasis:
    """The leading n eigenvectors of an uncentered covariance.

    `eigenvalues` holds the full spectrum λ_1 ≥ … ≥ λ_N ≥ 0 so that residuals
    and gaps can be read off without recomputing.
    """

    n: int
    basis: Matrix
    eigenvalues: Vector
    gap_degenerate: bool

    def projector(self) -> Matrix:
        """Return the orthogonal projector V·Vᵀ onto the span of the basis."""
        projector = self.basis @ self.basis.T
        return 0.5 * (projector + projector.T)

    def tail(self) -> float:
        """Return Σ_{i>n} λ_i, the optimal mean-square residual."""
        return float(np.sum(self.eigenvalues[self.n :]))


@dataclass(frozen=True)
class CovariancePerturbation:
    """Both sides of ‖B − B'‖₁ ≤ 𝔼^½‖Z − Z'‖² · (𝔼^½‖Z‖² + 𝔼^½‖Z'‖²)."""

    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        """Whether the bound holds up to round-off."""
        return self.lhs <= self.rhs + 1e-10 * (1.0 + self.rhs)


def covariance(e: Ensemble) -> Matrix:
    """Return the uncentered covariance C = Σ_k w_k x_k x_kᵀ.

    >>> covariance(Ensemble([[1.0, 0.0], [0.0, 1.0]], [0.8, 0.2])).tolist()
    [[0.8, 0.0], [0.0, 0.2]]

    Args:
        e: The ensemble.

    Returns:
        The symmetric positive semidefinite N×N covariance.
    """
    c = (e.points * e.weights[:, np.newaxis]).T @ e.points
    return 0.5 * (c + c.T)


def _clamped_spectrum(values: Vector) -> Vector:
    floor = -NEGATIVE_EIGENVALUE_TOL * max(1.0, float(np.max(np.abs(values))))
    if np.any(values < floor):
        raise NumericalError(
            f"Covariance has eigenvalue {float(np.min(values))!r} below {floor!r}"
        )
    return np.maximum(values, 0.0)


def pod(
    e: Ensemble,
    n: int,
    *,
    gap_tol: float = DEFAULT_GAP_TOL,
) -> PodBasis:
    """Compute the rank-n POD basis of an ensemble.

    >>> basis = pod(Ensemble([[1.0, 0.0], [0.0, 1.0]], [0.8, 0.2]), 1)
    >>> basis.tail(), basis.gap_degenerate
    (0.2, False)

    Args:
        e: The ensemble.
        n: The retained dimension, 1 ≤ n ≤ N.
        gap_tol: Relative tolerance (to λ₁) below which λ_n − λ_{n+1} counts as
            a tie.

    Raises:
        ParamLowRankValueError: Raised when n is out of range.

    Returns:
        The basis, the full clamped spectrum and the gap flag.
    """
    if (
        not isinstance(n, (int, np.integer))
        or isinstance(n, bool)
        or not 1 <= n <= e.dim
    ):
        raise ParamLowRankValueError(f"n must be between 1 and {e.dim}, got {n!r}")

    eig = sym_eig(covariance(e))
    values = _clamped_spectrum(np.array(eig.values))
    basis = np.array(eig.vectors[:, :n])
    degenerate = bool(n < e.dim and values[n - 1] - values[n] <= gap_tol * values[0])

    values.setflags(write=False)
    basis.setflags(write=False)
    return PodBasis(
        n=int(n), basis=basis, eigenvalues=values, gap_degenerate=degenerate
    )


def pod_residual(e: Ensemble, basis: PodBasis) -> float:
    """Return 𝔼‖X − V·VᵀX‖² by direct summation over the atoms."""
    return projection_error(e, basis.projector())


def _check_projector(p: Any, dim: int, tol: float) -> Matrix:
    matrix = as_matrix(p, "p")
    if matrix.shape != (dim, dim):
        raise ShapeMismatchError(f"p must be {dim}x{dim}, got {matrix.shape}")
    if (asymmetry := float(np.max(np.abs(matrix - matrix.T)))) > tol:
        raise ParamLowRankValueError(f"p is not symmetric: asymmetry {asymmetry:.3e}")
    if (defect := float(np.max(np.abs(matrix @ matrix - matrix)))) > tol:
        raise ParamLowRankValueError(
            f"p is not idempotent: ‖P²−P‖_max = {defect:.3e}"
        )
    return matrix


def projection_error(e: Ensemble, p: Any, *, tol: float = PROJECTOR_TOL) -> float:
    """Return the mean-square projection error 𝔼‖X − P·X‖².

    >>> e = Ensemble([[1.0, 0.0], [0.0, 1.0]], [0.8, 0.2])
    >>> projection_error(e, [[1.0, 0.0], [0.0, 0.0]])
    0.2

    Args:
        e: The ensemble.
        p: An orthogonal projector on ℝ^N.
        tol: Accepted asymmetry and idempotency defect of p.

    Raises:
        ParamLowRankValueError: Raised when p is not an orthogonal projector.

    Returns:
        The weighted sum Σ_k w_k ‖x_k − P·x_k‖².
    """
    projector = _check_projector(p, e.dim, tol)
    residuals = e.points - e.points @ projector.T
    return float(e.weights @ np.sum(residuals * residuals, axis=1))


def projection_error_identity(
    e: Ensemble, p: Any, *, tol: float = PROJECTOR_TOL
) -> float:
    """Return 𝔼‖X‖² − Σ_i λ_i ‖P·v_i‖² with (λ_i, v_i) the covariance eigenpairs.

    This equals `projection_error(e, p)` for every orthogonal projector p.

    Args:
        e: The ensemble.
        p: An orthogonal projector on ℝ^N.
        tol: Accepted asymmetry and idempotency defect of p.

    Returns:
        The spectral form of the projection error.
    """
    projector = _check_projector(p, e.dim, tol)
    eig = sym_eig(covariance(e))
    images = projector @ eig.vectors
    captured = float(eig.values @ np.sum(images * images, axis=0))
    return e.second_moment() - captured


def kkl_coefficients(
    e: Ensemble, b: PodBasis, *, rank_tol: float = DEFAULT_RANK_TOL
) -> Matrix:
    """Return the KKL coefficients η_{k,i} = ⟨x_k, v_i⟩ / √λ_i.

    Under the ensemble weights the coefficient columns are orthonormal.

    >>> e = Ensemble([[1.0, 0.0], [0.0, 1.0]], [0.8, 0.2])
    >>> eta = kkl_coefficients(e, pod(e, 2))
    >>> bool(np.allclose(eta.T @ (eta * e.weights[:, np.newaxis]), np.eye(2)))
    True

    Args:
        e: The ensemble.
        b: A POD basis of the ensemble.
        rank_tol: Eigenvalues at or below rank_tol·λ₁ count as vanishing.

    Raises:
        ShapeMismatchError: Raised when the basis dimension differs.
        RankDeficiencyError: Raised when one of the first n eigenvalues
            vanishes.

    Returns:
        The K×n coefficient matrix, one row per atom.
    """
    if b.basis.shape[0] != e.dim:
        raise ShapeMismatchError(
            f"Basis has dimension {b.basis.shape[0]}, ensemble has {e.dim}"
        )
    values = b.eigenvalues[: b.n]
    floor = rank_tol * float(b.eigenvalues[0])
    vanishing = np.flatnonzero(values <= floor)
    if len(vanishing):
        index = int(vanishing[0]) + 1
        raise RankDeficiencyError(
            f"λ_{index} = {float(values[index - 1])!r} vanishes, "
            f"the coefficient η_{index} is undefined",
            index=index,
        )
    return (e.points @ b.basis) / np.sqrt(values)


def kkl_reconstruct(b: PodBasis, eta: Any) -> Matrix:
    """Return Σ_i √λ_i η_{k,i} v_i for every atom, the projections V·Vᵀx_k.

    Args:
        b: The POD basis.
        eta: The K×n coefficients.

    Returns:
        The K×N reconstructed atoms.
    """
    coefficients = as_matrix(eta, "eta")
    return (coefficients * np.sqrt(b.eigenvalues[: b.n])) @ b.basis.T


def covariance_perturbation(ce: CoupledEnsemble) -> CovariancePerturbation:
    """Compare the trace-norm distance of two covariances with its moment bound.

    >>> ce = CoupledEnsemble([[1.0, 0.0]], [[2.0, 0.0]], [1.0])
    >>> result = covariance_perturbation(ce)
    >>> result.lhs, result.rhs
    (3.0, 3.0)

    Args:
        ce: The coupled ensemble of (Z, Z').

    Returns:
        lhs = ‖B − B'‖₁ and rhs = 𝔼^½‖Z − Z'‖² · (𝔼^½‖Z‖² + 𝔼^½‖Z'‖²).
    """
    first, second = ce.first(), ce.second()
    lhs = schatten_norm(covariance(first) - covariance(second), 1)
    difference = ce.first_points - ce.second_points
    distance = float(ce.weights @ np.sum(difference * difference, axis=1))
    rhs = np.sqrt(distance) * (
        np.sqrt(first.second_moment()) + np.sqrt(second.second_moment())
    )
    return CovariancePerturbation(lhs=lhs, rhs=float(rhs))
