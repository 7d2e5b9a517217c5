"""Dense real linear algebra.

The singular value decomposition is a one-sided (Hestenes) Jacobi method,
cyclic-by-row. Columns of the working matrix are rotated pairwise until they
are mutually orthogonal; their norms are then the singular values. Results
are put in a canonical form (nonincreasing singular values, largest entry of
every left singular vector nonnegative) so that two calls on the same input
return bit-identical factors.

Symmetric eigenproblems go through LAPACK (`numpy.linalg.eigh`), which keeps
them independent of the Jacobi code so either can serve as an oracle for the
other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Tuple, Union

import numpy as np

from paramlowrank.errors import (
    NonFiniteError,
    NumericalError,
    ParamLowRankValueError,
    ShapeMismatchError,
)
from paramlowrank.types import Matrix, Vector

DEFAULT_RANK_TOL = 1e-10
DEFAULT_SYMMETRY_TOL = 1e-12
MAX_JACOBI_SWEEPS = 64

_EPS = float(np.finfo(float).eps)


def as_matrix(a: Any, name: str = "a") -> Matrix:
    """Convert array-like input to a finite, non-empty, 2-D float matrix.

    >>> as_matrix([[1, 2], [3, 4]]).dtype
    dtype('float64')

    >>> as_matrix([[1.0, float("nan")]])
    Traceback (most recent call last):
        ...
    paramlowrank.errors.NonFiniteError: a has a non-finite entry at index (0, 1)

    Args:
        a: The input, anything `numpy.array` accepts.
        name: The argument name to use in diagnostics.

    Raises:
        ParamLowRankValueError: Raised when the input is not a real array.
        ShapeMismatchError: Raised when the input is not a non-empty 2-D array.

    Returns:
        A new float64 array.
    """
    try:
        matrix = np.array(a, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParamLowRankValueError(f"{name} is not a real matrix: {exc}")
    if matrix.ndim != 2 or 0 in matrix.shape:
        raise ShapeMismatchError(
            f"{name} must be a non-empty 2-D matrix, got shape {matrix.shape}"
        )
    check_finite(matrix, name)
    return matrix


def check_finite(array: np.ndarray, name: str) -> None:
    """Raise NonFiniteError naming the first NaN or Inf entry of an array.

    Args:
        array: The array to check.
        name: The argument name to use in diagnostics.

    Raises:
        NonFiniteError: Raised when the array holds a non-finite entry.
    """
    bad = np.argwhere(~np.isfinite(array))
    if len(bad):
        raise NonFiniteError(name, bad[0])


@dataclass(frozen=True)
class SvdFactors:
    """Singular value decomposition A = U·diag(sigma)·Vᵀ in canonical form.

    `u` is N×r and `v` is M×r with orthonormal columns, r = min(N, M), and
    `sigma` is nonincreasing. Arrays are read-only.
    """

    u: Matrix
    sigma: Vector
    v: Matrix
    rank_tol: float = DEFAULT_RANK_TOL

    def __post_init__(self) -> None:
        for array in (self.u, self.sigma, self.v):
            array.setflags(write=False)

    @property
    def shape(self) -> Tuple[int, int]:
        """Shape of the factorized matrix."""
        return self.u.shape[0], self.v.shape[0]

    @property
    def rank(self) -> int:
        """Numerical rank, the number of singular values above rank_tol·σ₁."""
        if not len(self.sigma) or self.sigma[0] <= 0:
            return 0
        return int(np.sum(self.sigma > self.rank_tol * self.sigma[0]))

    def reconstruct(self) -> Matrix:
        """Multiply the factors back together.

        Returns:
            U·diag(sigma)·Vᵀ.
        """
        return (self.u * self.sigma) @ self.v.T


@dataclass(frozen=True)
class SymEig:
    """Eigendecomposition of a symmetric matrix, eigenvalues nonincreasing."""

    vectors: Matrix
    values: Vector

    def __post_init__(self) -> None:
        self.vectors.setflags(write=False)
        self.values.setflags(write=False)


def svd(a: Any, *, rank_tol: float = DEFAULT_RANK_TOL) -> SvdFactors:
    """Compute the singular value decomposition of a matrix.

    >>> factors = svd([[3.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]])
    >>> factors.sigma.tolist()
    [3.0, 2.0, 1.0]
    >>> factors.rank
    3

    Args:
        a: The matrix to factorize.
        rank_tol: Relative tolerance for the numerical rank.

    Raises:
        ParamLowRankValueError: Raised when rank_tol is negative.
        NumericalError: Raised when Jacobi has not converged after
            MAX_JACOBI_SWEEPS sweeps.

    Returns:
        The canonical factors.
    """
    if not rank_tol >= 0:
        raise ParamLowRankValueError(f"rank_tol must be nonnegative, got {rank_tol}")
    matrix = as_matrix(a)
    transposed = matrix.shape[0] < matrix.shape[1]
    if transposed:
        matrix = matrix.T

    # Power-of-two scaling keeps the Gram entries in range and is exact.
    largest = float(np.max(np.abs(matrix)))
    scale = 2.0 ** math.frexp(largest)[1] if largest > 0 else 1.0
    left, sigma, right = _one_sided_jacobi(matrix / scale)
    sigma = sigma * scale
    if transposed:
        left, right = right, left

    signs = _canonical_signs(left)
    left, right = left * signs, right * signs
    return SvdFactors(u=left, sigma=sigma, v=right, rank_tol=rank_tol)


def _one_sided_jacobi(a: Matrix) -> Tuple[Matrix, Vector, Matrix]:
    """Run one-sided Jacobi on a matrix with at least as many rows as columns.

    Row i of the work array holds column i of W = A·J followed by column i of
    the accumulated rotation J, so one rotation updates both at once.
    """
    rows, cols = a.shape
    work = np.hstack([a.T, np.eye(cols)])
    threshold = rows * _EPS

    for _ in range(MAX_JACOBI_SWEEPS):
        rotated = False
        for i in range(cols - 1):
            for j in range(i + 1, cols):
                w_i = work[i, :rows]
                w_j = work[j, :rows]
                alpha = float(w_i @ w_i)
                beta = float(w_j @ w_j)
                gamma = float(w_i @ w_j)
                if gamma == 0.0 or abs(gamma) <= threshold * math.sqrt(alpha * beta):
                    continue

                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                if abs(zeta) > 1e150:
                    t = 0.5 / zeta
                else:
                    t = math.copysign(1.0, zeta) / (
                        abs(zeta) + math.sqrt(1.0 + zeta * zeta)
                    )
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                row_i = work[i].copy()
                work[i] = c * row_i - s * work[j]
                work[j] = s * row_i + c * work[j]
        if not rotated:
            break
    else:
        raise NumericalError(
            f"Jacobi SVD did not converge in {MAX_JACOBI_SWEEPS} sweeps"
        )

    columns = work[:, :rows].T
    rotations = work[:, rows:].T
    sigma = np.sqrt(np.sum(columns * columns, axis=0))
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    columns = columns[:, order]
    rotations = rotations[:, order]

    left = np.zeros((rows, cols))
    floor = threshold * sigma[0]
    missing = []
    for k in range(cols):
        if sigma[k] > floor and sigma[k] > 0:
            left[:, k] = columns[:, k] / sigma[k]
        else:
            missing.append(k)
    if missing:
        _complete_orthonormal(left, missing)
    return left, sigma, rotations


def _complete_orthonormal(q: Matrix, missing: List[int]) -> None:
    # Fills the listed (zero) columns of q in place with unit vectors
    # orthogonal to all other columns, taken from the standard basis.
    filled = [k for k in range(q.shape[1]) if k not in missing]
    for k in missing:
        basis = q[:, filled]
        candidates = np.eye(q.shape[0])
        for _ in range(2):
            candidates -= basis @ (basis.T @ candidates)
        norms = np.sqrt(np.sum(candidates * candidates, axis=0))
        best = int(np.argmax(norms))
        q[:, k] = candidates[:, best] / norms[best]
        filled.append(k)


def _canonical_signs(left: Matrix) -> Vector:
    """Return column signs making each column's largest-magnitude entry nonnegative.

    Ties in magnitude go to the lowest row index.
    """
    pivots = np.argmax(np.abs(left), axis=0)
    return np.where(left[pivots, np.arange(left.shape[1])] < 0, -1.0, 1.0)


def sym_eig(s: Any, symmetry_tol: float = DEFAULT_SYMMETRY_TOL) -> SymEig:
    """Eigendecompose a symmetric matrix.

    >>> eig = sym_eig([[0.2, 0.0], [0.0, 0.8]])
    >>> eig.values.tolist()
    [0.8, 0.2]

    Eigenvectors follow the same sign convention as left singular vectors.

    Args:
        s: A symmetric matrix.
        symmetry_tol: Accepted asymmetry ‖S − Sᵀ‖_max relative to max(1, ‖S‖_max).

    Raises:
        ShapeMismatchError: Raised when the matrix is not square.
        ParamLowRankValueError: Raised when the matrix is not symmetric.

    Returns:
        Eigenvectors as columns and nonincreasing eigenvalues.
    """
    matrix = as_matrix(s, "s")
    if matrix.shape[0] != matrix.shape[1]:
        raise ShapeMismatchError(f"s must be square, got shape {matrix.shape}")
    scale = max(1.0, float(np.max(np.abs(matrix))))
    asymmetry = float(np.max(np.abs(matrix - matrix.T)))
    if asymmetry > symmetry_tol * scale:
        raise ParamLowRankValueError(
            f"s is not symmetric: max asymmetry {asymmetry:.3e} exceeds "
            f"{symmetry_tol:.1e} x {scale:.3e}"
        )

    values, vectors = np.linalg.eigh(0.5 * (matrix + matrix.T))
    order = np.argsort(-values, kind="stable")
    vectors = vectors[:, order]
    vectors = vectors * _canonical_signs(vectors)
    return SymEig(vectors=vectors, values=values[order])


def is_symmetric(a: Matrix, tol: float = DEFAULT_SYMMETRY_TOL) -> bool:
    """Whether a square matrix is symmetric within tol·max(1, ‖A‖_max)."""
    if a.shape[0] != a.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(a))))
    return float(np.max(np.abs(a - a.T))) <= tol * scale


def operator_norm(a: Any) -> float:
    """Return the operator (spectral) norm, the largest singular value.

    >>> operator_norm([[3.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]])
    3.0

    Args:
        a: The matrix.

    Returns:
        σ₁(A), 0 for the zero matrix.
    """
    return float(svd(a).sigma[0])


def schatten_norm(a: Any, p: float) -> float:
    """Return the Schatten p-norm (Σ σ_i^p)^(1/p).

    p = 1 is the trace norm, p = 2 the Hilbert-Schmidt (Frobenius) norm and
    p = inf the operator norm.

    >>> schatten_norm([[3.0, 0.0], [0.0, 4.0]], 2)
    5.0
    >>> schatten_norm([[3.0, 0.0], [0.0, 4.0]], 1)
    7.0

    Args:
        a: The matrix.
        p: The order, at least 1.

    Raises:
        ParamLowRankValueError: Raised when p < 1.

    Returns:
        The norm.
    """
    if not p >= 1:
        raise ParamLowRankValueError(f"p must be at least 1, got {p}")
    sigma = svd(a).sigma
    top = float(sigma[0])
    if top == 0.0 or math.isinf(p):
        return top
    return top * float(np.sum((sigma / top) ** p)) ** (1.0 / p)


def frobenius_norm(a: Any) -> float:
    """Return the entrywise Frobenius norm."""
    return float(np.linalg.norm(as_matrix(a), "fro"))


def hs_inner(a: Any, b: Any) -> float:
    """Return the Hilbert-Schmidt inner product Tr(AᵀB).

    >>> hs_inner([[1.0, 0.0], [0.0, 2.0]], [[3.0, 0.0], [0.0, 4.0]])
    11.0

    Args:
        a: The first matrix.
        b: The second matrix, same shape.

    Raises:
        ShapeMismatchError: Raised when the shapes differ.

    Returns:
        The inner product.
    """
    first, second = as_matrix(a, "a"), as_matrix(b, "b")
    if first.shape != second.shape:
        raise ShapeMismatchError(
            f"Shapes differ: {first.shape} and {second.shape}"
        )
    return float(np.trace(first.T @ second))


def orthonormality_defect(q: Matrix) -> float:
    """Return ‖QᵀQ − I‖_max."""
    return float(np.max(np.abs(q.T @ q - np.eye(q.shape[1]))))


def nearest_orthonormal(m: Any) -> Matrix:
    """Return the polar factor of a matrix, the nearest matrix with orthonormal columns.

    For a tall m = U·Σ·Vᵀ this is U·Vᵀ, the minimizer of ‖m − Q‖_F over
    matrices Q with QᵀQ = I.

    Args:
        m: A tall (or square) matrix.

    Returns:
        The orthonormal polar factor, same shape as m.
    """
    factors = svd(m)
    return factors.u @ factors.v.T


def parse_matrix_csv(text: str) -> Matrix:
    """Parse a matrix from CSV text: decimal rows, comma separated, no header.

    >>> parse_matrix_csv("1,2\\n3,4\\n").tolist()
    [[1.0, 2.0], [3.0, 4.0]]

    >>> parse_matrix_csv("1,2\\n3\\n")
    Traceback (most recent call last):
        ...
    paramlowrank.errors.ParamLowRankValueError: CSV row 2 has 1 entries, expected 2

    Args:
        text: The CSV content.

    Raises:
        ParamLowRankValueError: Raised when a row is ragged or an entry is not a
            number.

    Returns:
        The matrix.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    rows: List[List[float]] = []
    for line_number, line in enumerate(lines, start=1):
        fields = line.split(",")
        if rows and len(fields) != len(rows[0]):
            raise ParamLowRankValueError(
                f"CSV row {line_number} has {len(fields)} entries, expected {len(rows[0])}"
            )
        try:
            rows.append([float(field) for field in fields])
        except ValueError:
            raise ParamLowRankValueError(f"CSV row {line_number} is not numeric")
    return as_matrix(rows, "csv")


def read_matrix_csv(path: Union[str, Path]) -> Matrix:
    """Read a matrix from a CSV file.

    Args:
        path: The file to read.

    Returns:
        The matrix.
    """
    with Path(path).open(encoding="utf-8") as fp:
        return parse_matrix_csv(fp.read())


def write_matrix_csv(path: Union[str, Path], a: Any) -> None:
    """Write a matrix as CSV with LF line endings and round-trip float formatting.

    Args:
        path: The file to write.
        a: The matrix.
    """
    matrix = as_matrix(a)
    lines = [",".join(repr(float(value)) for value in row) for row in matrix]
    with Path(path).open("w", encoding="utf-8", newline="\n") as fp:
        fp.write("\n".join(lines) + "\n")
