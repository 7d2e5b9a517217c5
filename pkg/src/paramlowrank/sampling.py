"""Seeded random generators for property checks.

All functions draw from a caller-supplied `numpy.random.Generator` so a
single stream can drive a whole verification run.
"""
from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from paramlowrank.families import ConjugatedSpectrumFamily
from paramlowrank.stochastic import CoupledEnsemble, Ensemble
from paramlowrank.types import Matrix


def random_matrix(
    rng: np.random.Generator,
    rows: int,
    cols: Optional[int] = None,
    *,
    scale: float = 1.0,
) -> Matrix:
    """Draw a matrix with independent standard normal entries times scale."""
    return scale * rng.standard_normal((rows, rows if cols is None else cols))


def random_shape(rng: np.random.Generator, max_dim: int = 8) -> Tuple[int, int]:
    """Draw a shape (rows, cols) with both sides between 1 and max_dim."""
    return int(rng.integers(1, max_dim + 1)), int(rng.integers(1, max_dim + 1))


def random_rank_n(rng: np.random.Generator, rows: int, cols: int, n: int) -> Matrix:
    """Draw a competitor X·Yᵀ of rank at most n with Gaussian X and Y."""
    return rng.standard_normal((rows, n)) @ rng.standard_normal((cols, n)).T


def random_orthonormal_frame(rng: np.random.Generator, dim: int, n: int) -> Matrix:
    """Draw a dim×n matrix with orthonormal columns, Haar distributed.

    Uses the QR factorization of a Gaussian matrix with the signs of R's
    diagonal moved into Q.

    Args:
        rng: The random generator.
        dim: The ambient dimension.
        n: The number of columns, at most dim.

    Returns:
        The orthonormal frame.
    """
    q, r = np.linalg.qr(rng.standard_normal((dim, n)))
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    return q * signs


def random_orthoprojector(rng: np.random.Generator, dim: int, n: int) -> Matrix:
    """Draw a rank-n orthogonal projector on ℝ^dim."""
    frame = random_orthonormal_frame(rng, dim, n)
    projector = frame @ frame.T
    return 0.5 * (projector + projector.T)


def random_symmetric(rng: np.random.Generator, dim: int) -> Matrix:
    """Draw a symmetric matrix (G + Gᵀ)/2 with Gaussian G."""
    g = rng.standard_normal((dim, dim))
    return 0.5 * (g + g.T)


def random_weights(rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw probability weights from the flat Dirichlet distribution."""
    weights = rng.dirichlet(np.ones(count))
    return weights / np.sum(weights)


def random_ensemble(
    rng: np.random.Generator,
    dim: int,
    size: int,
    *,
    rank: Optional[int] = None,
) -> Ensemble:
    """Draw an ensemble of Gaussian atoms with Dirichlet weights.

    Args:
        rng: The random generator.
        dim: The dimension N.
        size: The number K of atoms.
        rank: If given, the atoms lie in a random subspace of this dimension.

    Returns:
        The ensemble.
    """
    if rank is None:
        points = rng.standard_normal((size, dim))
    else:
        frame = random_orthonormal_frame(rng, dim, rank)
        points = rng.standard_normal((size, rank)) @ frame.T
    return Ensemble(points, random_weights(rng, size))


def random_coupled_ensemble(
    rng: np.random.Generator, dim: int, size: int
) -> CoupledEnsemble:
    """Draw a coupling of two Gaussian ensembles, Z' a random perturbation of Z."""
    first = rng.standard_normal((size, dim))
    second = first + rng.uniform(0.0, 2.0) * rng.standard_normal((size, dim))
    return CoupledEnsemble(first, second, random_weights(rng, size))


def random_smooth_family(
    rng: np.random.Generator,
    dim: int,
    *,
    min_gap: float = 0.2,
    max_slope: float = 0.5,
) -> ConjugatedSpectrumFamily:
    """Draw a smooth symmetric family on [0, 1] with every spectral gap ≥ min_gap.

    Eigenvalues start at least min_gap + 2·max_slope apart and move with
    slopes in [−max_slope, max_slope], so neighbours never come closer than
    min_gap; the smallest one stays positive.

    Args:
        rng: The random generator.
        dim: The matrix size, at least 2.
        min_gap: The guaranteed gap between consecutive eigenvalues.
        max_slope: The largest eigenvalue speed.

    Returns:
        The family.
    """
    spacing = min_gap + 2.0 * max_slope + rng.uniform(0.0, 0.5, size=dim - 1)
    smallest = max_slope + rng.uniform(0.5, 1.0)
    base = smallest + np.concatenate([[0.0], np.cumsum(spacing)])[::-1]
    slope = rng.uniform(-max_slope, max_slope, size=dim)
    g = rng.standard_normal((dim, dim))
    return ConjugatedSpectrumFamily(base, slope, 0.25 * (g - g.T))
