"""Optimal rank-n truncation and the inequalities behind its optimality."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence, Tuple

import numpy as np

from paramlowrank.errors import ParamLowRankValueError, ShapeMismatchError
from paramlowrank.linalg_core import (
    DEFAULT_RANK_TOL,
    SvdFactors,
    as_matrix,
    check_finite,
    frobenius_norm,
    hs_inner,
    operator_norm,
    orthonormality_defect,
    svd,
)
from paramlowrank.types import Matrix, Vector

DEFAULT_GAP_TOL = 1e-8
FRAME_TOL = 1e-10


@dataclass(frozen=True)
class RankNApprox:
    """The truncated operator A_n = Σ_{i≤n} σ_i u_i v_iᵀ and its errors.

    `op_error` is σ_{n+1}(A) and `frob_error` is √(Σ_{i>n} σ_i(A)²), both read
    off the singular values. `gap_degenerate` is set when σ_n and σ_{n+1}
    coincide up to the gap tolerance: A_n is still optimal, but no longer the
    unique optimum.
    """

    n: int
    approx: Matrix
    factors: SvdFactors
    op_error: float
    frob_error: float
    gap_degenerate: bool


@dataclass(frozen=True)
class CappedSimplexSolution:
    """Maximizer of Σ λ_i a_i over {0 ≤ a_i ≤ 1, Σ a_i = n}."""

    weights: Vector
    value: float


def _check_rank(n: Any, upper: int) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ParamLowRankValueError(f"n must be an integer, got {n!r}")
    if not 0 <= n <= upper:
        raise ParamLowRankValueError(f"n must be between 0 and {upper}, got {n}")
    return int(n)


def truncate(f: SvdFactors, n: int, *, gap_tol: float = DEFAULT_GAP_TOL) -> RankNApprox:
    """Truncate a singular value decomposition to rank n.

    >>> from paramlowrank.linalg_core import svd
    >>> approx = truncate(svd([[3.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]]), 2)
    >>> approx.approx.tolist()
    [[3.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 0.0]]
    >>> approx.op_error, approx.frob_error
    (1.0, 1.0)

    Args:
        f: The factors of A.
        n: The target rank, 0 ≤ n ≤ min(rows, cols).
        gap_tol: Relative tolerance (to σ₁) below which σ_n − σ_{n+1} counts
            as a tie.

    Returns:
        The rank-n approximant with its operator and Hilbert-Schmidt errors.
    """
    r = len(f.sigma)
    n = _check_rank(n, r)

    u, sigma, v = f.u[:, :n].copy(), f.sigma[:n].copy(), f.v[:, :n].copy()
    tail = f.sigma[n:]
    return RankNApprox(
        n=n,
        approx=(u * sigma) @ v.T,
        factors=SvdFactors(u=u, sigma=sigma, v=v, rank_tol=f.rank_tol),
        op_error=float(tail[0]) if len(tail) else 0.0,
        frob_error=float(np.sqrt(np.sum(tail * tail))),
        gap_degenerate=bool(
            0 < n < r and f.sigma[n - 1] - f.sigma[n] <= gap_tol * f.sigma[0]
        ),
    )


def best_approximation(
    a: Any, n: int, *, rank_tol: float = DEFAULT_RANK_TOL
) -> RankNApprox:
    """Factorize a matrix and truncate it to rank n.

    Args:
        a: The matrix.
        n: The target rank.
        rank_tol: Relative tolerance for the numerical rank.

    Returns:
        The optimal rank-n approximant.
    """
    return truncate(svd(a, rank_tol=rank_tol), n)


def singular_value(a: Any, n: int) -> float:
    """Return the n-th singular value σ_n(A), counting from 1.

    σ_n(A) is the distance from A to the matrices of rank below n, so it is 0
    past the matrix dimensions.

    >>> singular_value([[3.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]], 2)
    2.0
    >>> singular_value([[3.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]], 7)
    0.0

    Args:
        a: The matrix.
        n: The index, at least 1.

    Raises:
        ParamLowRankValueError: Raised when n < 1.

    Returns:
        σ_n(A).
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise ParamLowRankValueError(f"n must be a positive integer, got {n!r}")
    sigma = svd(a).sigma
    return float(sigma[n - 1]) if n <= len(sigma) else 0.0


def eckart_young_residuals(a: Any, approx: RankNApprox) -> Tuple[float, float]:
    """Re-factorize A − A_n and return its operator and Hilbert-Schmidt norms.

    This is the slow route to the error fields of RankNApprox and only serves
    as a cross-check.

    Args:
        a: The matrix that was truncated.
        approx: Its truncation.

    Returns:
        ‖A − A_n‖₂ and ‖A − A_n‖_F.
    """
    residual = as_matrix(a) - approx.approx
    return operator_norm(residual), frobenius_norm(residual)


def _as_spectrum(lam: Any) -> Vector:
    values = np.asarray(lam, dtype=float).reshape(-1)
    check_finite(values, "lambda")
    if np.any(values < 0):
        raise ParamLowRankValueError("lambda must be nonnegative")
    return values


def capped_simplex_max(lam: Sequence[float], n: int) -> CappedSimplexSolution:
    """Maximize Σ λ_i a_i over the capped simplex {0 ≤ a_i ≤ 1, Σ a_i = n}.

    For nonincreasing λ the top-n indicator is a maximizer.

    >>> solution = capped_simplex_max([3.0, 2.0, 1.0], 2)
    >>> solution.value, solution.weights.tolist()
    (5.0, [1.0, 1.0, 0.0])

    Args:
        lam: A nonincreasing, nonnegative vector.
        n: The budget, 0 ≤ n ≤ len(lam).

    Raises:
        ParamLowRankValueError: Raised when lam is not nonincreasing.

    Returns:
        The greedy maximizer and its value.
    """
    values = _as_spectrum(lam)
    if np.any(np.diff(values) > 0):
        raise ParamLowRankValueError("lambda must be nonincreasing, sort it first")
    n = _check_rank(n, len(values))

    weights = np.zeros(len(values))
    weights[:n] = 1.0
    return CappedSimplexSolution(weights=weights, value=float(np.dot(values, weights)))


def capped_simplex_grid_max(
    lam: Sequence[float], n: int, step: float = 0.05
) -> CappedSimplexSolution:
    """Maximize Σ λ_i a_i over capped-simplex weights restricted to multiples of step.

    The search is exhaustive over the discretized set, done by dynamic
    programming over the running weight total. λ need not be sorted.

    Args:
        lam: A nonnegative vector.
        n: The budget, 0 ≤ n ≤ len(lam).
        step: The grid step, 1/step must be an integer.

    Raises:
        ParamLowRankValueError: Raised when 1/step is not an integer.

    Returns:
        The best grid point and its value.
    """
    values = _as_spectrum(lam)
    n = _check_rank(n, len(values))
    levels = int(round(1.0 / step)) if step > 0 else 0
    if levels < 1 or abs(levels * step - 1.0) > 1e-9:
        raise ParamLowRankValueError(
            f"1/step must be a positive integer, got step={step}"
        )

    total = n * levels
    best = np.full(total + 1, -np.inf)
    best[0] = 0.0
    choices = np.zeros((len(values), total + 1), dtype=int)
    for i, value in enumerate(values):
        updated = np.full(total + 1, -np.inf)
        for units in range(levels + 1):
            candidate = np.full(total + 1, -np.inf)
            candidate[units:] = best[: total + 1 - units] + value * units * step
            better = candidate > updated
            updated[better] = candidate[better]
            choices[i, better] = units
        best = updated

    weights = np.zeros(len(values))
    remaining = total
    for i in range(len(values) - 1, -1, -1):
        units = choices[i, remaining]
        weights[i] = units * step
        remaining -= units
    return CappedSimplexSolution(weights=weights, value=float(np.dot(values, weights)))


def von_neumann_slack(a: Any, b: Any) -> float:
    """Return Σ_i σ_i(A)σ_i(B) − Tr(AᵀB), which is never negative.

    >>> von_neumann_slack([[1.0, 0.0], [0.0, 2.0]], [[1.0, 0.0], [0.0, 2.0]])
    0.0

    Args:
        a: The first matrix.
        b: The second matrix, same shape.

    Raises:
        ShapeMismatchError: Raised when the shapes differ.

    Returns:
        The slack of the trace inequality.
    """
    first, second = as_matrix(a, "a"), as_matrix(b, "b")
    if first.shape != second.shape:
        raise ShapeMismatchError(f"Shapes differ: {first.shape} and {second.shape}")
    aligned = float(np.dot(svd(first).sigma, svd(second).sigma))
    return aligned - hs_inner(first, second)


def frame_energy(a: Any, frame: Any) -> float:
    """Return Σ_i ‖A·ũ_i‖² for an orthonormal set {ũ_1, …, ũ_n}.

    The energy never exceeds Σ_{i≤n} σ_i(A)², with equality on the top-n
    right singular subspace.

    >>> frame_energy(
    ...     [[3.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]],
    ...     [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
    ... )
    13.0

    Args:
        a: The N×M matrix.
        frame: n orthonormal vectors of length M, one per row.

    Raises:
        ShapeMismatchError: Raised when the vectors do not have length M.
        ParamLowRankValueError: Raised when the vectors are not orthonormal.

    Returns:
        The captured energy.
    """
    matrix = as_matrix(a)
    vectors = as_matrix(np.atleast_2d(np.asarray(frame, dtype=float)), "frame")
    if vectors.shape[1] != matrix.shape[1]:
        raise ShapeMismatchError(
            f"Frame vectors have length {vectors.shape[1]}, expected {matrix.shape[1]}"
        )
    if (defect := orthonormality_defect(vectors.T)) > FRAME_TOL:
        raise ParamLowRankValueError(
            f"Frame is not orthonormal: defect {defect:.3e} exceeds {FRAME_TOL:.0e}"
        )
    images = matrix @ vectors.T
    return float(np.sum(images * images))
