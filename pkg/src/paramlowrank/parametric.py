"""Parameter sweeps of optimal truncations.

A sweep solves the rank-n problem independently at every grid point,
records the spectra and their gaps, and leaves per-point frames that can be
aligned into a continuous path wherever the spectral gap stays open.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np

from paramlowrank.errors import ParamLowRankError, ParamLowRankValueError, SweepError
from paramlowrank.families import Member, ParamFamily
from paramlowrank.grid import grid_list, validate_grid
from paramlowrank.linalg_core import (
    DEFAULT_RANK_TOL,
    SvdFactors,
    is_symmetric,
    svd,
    sym_eig,
)
from paramlowrank.lowrank import DEFAULT_GAP_TOL, RankNApprox, truncate
from paramlowrank.printer import Color, Printer
from paramlowrank.stochastic import Ensemble, PodBasis, kkl_coefficients, pod
from paramlowrank.types import Matrix, Objective, Vector

SVD = "svd"
POD = "pod"
ALIGNMENT_TOL = 1e-8
CROSSING_COSINE = 1.0 / math.sqrt(2.0)
MAX_CROSSING_BISECTIONS = 12
ARGMIN_TIE_TOL = 1e-12

_T = TypeVar("_T")


@dataclass(frozen=True)
class Frame:
    """The optimal rank-n data at one grid point, A_n = U·core·Vᵀ.

    Right after a sweep `core` is diag(σ_1..σ_n) (diag(λ_1..λ_n) for POD,
    where `u` is None and `v` is the POD basis). Alignment rotates all three
    without changing the product.
    """

    u: Optional[Matrix]
    core: Matrix
    v: Matrix

    def approximant(self) -> Matrix:
        """Return U·core·Vᵀ, the optimal approximant (matrix sweeps only)."""
        if self.u is None:
            raise ParamLowRankValueError("Ensemble frames have no approximant")
        return self.u @ self.core @ self.v.T

    def projector(self) -> Matrix:
        """Return V·Vᵀ, the projector onto the optimal right subspace."""
        projector = self.v @ self.v.T
        return 0.5 * (projector + projector.T)


@dataclass(frozen=True)
class SweepResult:
    """Per-point optimal truncations along a parameter grid.

    `spectra` has one row per grid point holding σ(A_ξ) (SVD) or λ(C_ξ) (POD),
    each nonincreasing. `gaps` holds σ_n − σ_{n+1} (resp. λ_n − λ_{n+1}),
    and `degenerate` marks the points where the gap is at most gap_tol times
    the leading value.
    `family` is the family the sweep was computed from; gap_report evaluates
    it between grid points.
    """

    kind: str
    n: int
    grid: Vector
    members: List[Member]
    spectra: Matrix
    gaps: Vector
    degenerate: np.ndarray
    frames: List[Frame]
    gap_tol: float = DEFAULT_GAP_TOL
    bases: List[PodBasis] = field(default_factory=list)
    aligned: bool = False
    alignment_skipped: List[int] = field(default_factory=list)
    family: Optional[ParamFamily] = field(default=None, repr=False, compare=False)

    @property
    def degenerate_xis(self) -> List[float]:
        """Grid values where the rank-n gap is degenerate."""
        return grid_list(self.grid[self.degenerate])

    def compile(self) -> Dict[str, Any]:  # noqa: A003
        """Compile the sweep to a JSON-ready dictionary.

        Returns:
            The grid, spectra, gaps and flags.
        """
        return {
            "kind": self.kind,
            "n": self.n,
            "gap_tol": self.gap_tol,
            "grid": grid_list(self.grid),
            "spectra": self.spectra.tolist(),
            "gaps": self.gaps.tolist(),
            "degenerate": [bool(flag) for flag in self.degenerate],
            "aligned": self.aligned,
            "alignment_skipped": [
                float(self.grid[k + 1]) for k in self.alignment_skipped
            ],
        }

    def to_json(self, filename: Union[str, Path]) -> None:
        """Write the compiled sweep as JSON.

        Args:
            filename: The name of the file to write the JSON to.
        """
        with Path(filename).open("w", encoding="utf-8") as fp:
            json.dump(self.compile(), fp)


@dataclass(frozen=True)
class GapRow:
    """The rank-n gap at one grid point."""

    xi: float
    gap: float
    relative_gap: float
    degenerate: bool


@dataclass(frozen=True)
class GapReport:
    """Gaps along a sweep with the grid intervals suspected to contain a crossing."""

    n: int
    gap_tol: float
    rows: List[GapRow]
    crossings: List[Tuple[float, float]]

    @property
    def degenerate_xis(self) -> List[float]:
        """Grid values flagged degenerate."""
        return [row.xi for row in self.rows if row.degenerate]

    def compile(self) -> Dict[str, Any]:  # noqa: A003
        """Compile the report to a JSON-ready dictionary.

        Returns:
            One entry per grid point plus the suspected crossings.
        """
        return {
            "n": self.n,
            "gap_tol": self.gap_tol,
            "rows": [
                {
                    "xi": row.xi,
                    "gap": row.gap,
                    "relative_gap": row.relative_gap,
                    "degenerate": row.degenerate,
                }
                for row in self.rows
            ],
            "crossings": [list(interval) for interval in self.crossings],
        }

    def to_json(self, filename: Union[str, Path]) -> None:
        """Write the compiled report as JSON.

        Args:
            filename: The name of the file to write the JSON to.
        """
        with Path(filename).open("w", encoding="utf-8") as fp:
            json.dump(self.compile(), fp)


@dataclass(frozen=True)
class ProjectorPath:
    """Rank-n orthogonal projectors P_ξ onto the optimal subspaces along a grid."""

    n: int
    grid: Vector
    projectors: List[Matrix]
    hs_increments: Vector
    continuity_certified: bool
    degenerate_xis: List[float]

    def compile(self) -> Dict[str, Any]:  # noqa: A003
        """Compile the path to a JSON-ready dictionary.

        Returns:
            The grid, projectors (row-major), increments and certificate.
        """
        return {
            "n": self.n,
            "grid": grid_list(self.grid),
            "projectors": [projector.tolist() for projector in self.projectors],
            "hs_increments": self.hs_increments.tolist(),
            "continuity_certified": self.continuity_certified,
            "degenerate_xis": self.degenerate_xis,
        }

    def to_json(self, filename: Union[str, Path]) -> None:
        """Write the compiled path as JSON.

        Args:
            filename: The name of the file to write the JSON to.
        """
        with Path(filename).open("w", encoding="utf-8") as fp:
            json.dump(self.compile(), fp)


@dataclass(frozen=True)
class ArgminResult:
    """Grid minimizer of c ↦ J(ξ, c)."""

    c_star: float
    value: float
    index: int


@dataclass(frozen=True)
class ArgminPath:
    """Minimizers and minimum values of J(ξ, ·) along a parameter grid."""

    grid: Vector
    c_star: Vector
    values: Vector

    def largest_jump(self) -> Tuple[float, float, float]:
        """Return the grid interval where c* moves most, and by how much."""
        steps = np.abs(np.diff(self.c_star))
        k = int(np.argmax(steps))
        return float(self.grid[k]), float(self.grid[k + 1]), float(steps[k])


@dataclass(frozen=True)
class KklPath:
    """Parametric KKL expansion along a POD sweep.

    `scales[k, i]` is s_i(ξ_k) = √λ_i^{ξ_k}; `coefficients[k]` holds η_{ξ_k}
    as a K×n matrix, one row per atom.
    """

    grid: Vector
    scales: Matrix
    coefficients: List[Matrix]


def eval_family(f: ParamFamily, xi: float) -> Member:
    """Evaluate a family at ξ.

    >>> from paramlowrank.families import builtin_family
    >>> eval_family(builtin_family("diag2"), 0.5).tolist()
    [[0.5, 0.0], [0.0, 0.5]]

    Args:
        f: The family.
        xi: The parameter value.

    Returns:
        The member at ξ.
    """
    return f(xi)


def _check_n(n: Any) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise ParamLowRankValueError(f"n must be a positive integer, got {n!r}")
    return int(n)


def map_grid(
    solve: Callable[[float], _T], grid: Vector, workers: Optional[int]
) -> List[_T]:
    """Apply solve to every grid value, in order, optionally on a thread pool.

    Args:
        solve: The per-point computation.
        grid: The parameter values.
        workers: Number of threads; sequential if None or 1.

    Raises:
        SweepError: Raised when solve fails, naming the parameter value.

    Returns:
        The results in grid order.
    """

    def guarded(xi: float) -> _T:
        try:
            return solve(xi)
        except ParamLowRankError as exc:
            raise SweepError(str(exc), xi=float(xi)) from exc

    if workers is None or workers <= 1:
        return [guarded(xi) for xi in grid]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(guarded, grid))


def _gap_flags(spectra: Matrix, n: int, gap_tol: float) -> Tuple[Vector, np.ndarray]:
    width = spectra.shape[1]
    if n >= width:
        return spectra[:, n - 1].copy(), np.zeros(len(spectra), dtype=bool)
    gaps = spectra[:, n - 1] - spectra[:, n]
    return gaps, gaps <= gap_tol * spectra[:, 0]


def _check_member_rank(f: ParamFamily, xi: float, n: int) -> None:
    member = f(xi)
    upper = member.dim if isinstance(member, Ensemble) else min(member.shape)
    if n > upper:
        raise ParamLowRankValueError(f"n must be between 1 and {upper}, got {n}")


def sweep_svd(
    f: ParamFamily,
    grid: Sequence[float],
    n: int,
    *,
    gap_tol: float = DEFAULT_GAP_TOL,
    rank_tol: float = DEFAULT_RANK_TOL,
    workers: Optional[int] = None,
    printer: Optional[Printer] = None,
) -> SweepResult:
    """Compute the optimal rank-n truncation at every grid point.

    Args:
        f: A matrix-valued family.
        grid: Strictly increasing parameter values inside the family domain.
        n: The target rank, 1 ≤ n ≤ min(rows, cols).
        gap_tol: Relative tolerance for degenerate gaps.
        rank_tol: Relative tolerance for the numerical rank.
        workers: Number of threads; points are solved sequentially if None.
        printer: Receives progress messages.

    Raises:
        ParamLowRankValueError: Raised when the family is not matrix-valued
            or n is out of range.
        SweepError: Raised when the truncation fails at some grid point,
            naming the parameter value.

    Returns:
        The sweep, ordered by grid index.
    """
    n = _check_n(n)
    values = validate_grid(grid, min_count=1)
    if not f.is_matrix:
        raise ParamLowRankValueError(
            "sweep_svd needs a matrix-valued family, use sweep_pod"
        )
    _check_member_rank(f, values[0], n)
    if printer:
        printer(
            f"Sweeping SVD over {len(values)} grid points",
            color=Color.BLUE,
            emoji="🔎",
        )

    def solve(xi: float) -> Tuple[Member, SvdFactors, RankNApprox]:
        member = f(xi)
        factors = svd(member, rank_tol=rank_tol)
        return member, factors, truncate(factors, n, gap_tol=gap_tol)

    results = map_grid(solve, values, workers)
    spectra = np.array([factors.sigma for _, factors, _ in results])
    gaps, degenerate = _gap_flags(spectra, n, gap_tol)
    frames = [
        Frame(
            u=approx.factors.u,
            core=np.diag(approx.factors.sigma),
            v=approx.factors.v,
        )
        for _, _, approx in results
    ]
    if printer and degenerate.any():
        printer(
            f"Degenerate gaps at xi={grid_list(values[degenerate])}",
            color=Color.YELLOW,
            emoji="⚠️",
        )
    return SweepResult(
        kind=SVD,
        n=n,
        grid=values,
        members=[member for member, _, _ in results],
        spectra=spectra,
        gaps=gaps,
        degenerate=degenerate,
        frames=frames,
        gap_tol=gap_tol,
        family=f,
    )


def sweep_pod(
    f: ParamFamily,
    grid: Sequence[float],
    n: int,
    *,
    gap_tol: float = DEFAULT_GAP_TOL,
    workers: Optional[int] = None,
    printer: Optional[Printer] = None,
) -> SweepResult:
    """Compute the rank-n POD basis at every grid point.

    Args:
        f: An ensemble-valued family.
        grid: Strictly increasing parameter values inside the family domain.
        n: The retained dimension, 1 ≤ n ≤ N.
        gap_tol: Relative tolerance for degenerate gaps.
        workers: Number of threads; points are solved sequentially if None.
        printer: Receives progress messages.

    Raises:
        ParamLowRankValueError: Raised when the family is not ensemble-valued.
        SweepError: Raised when the decomposition fails at some grid point,
            naming the parameter value.

    Returns:
        The sweep, ordered by grid index.
    """
    n = _check_n(n)
    values = validate_grid(grid, min_count=1)
    if f.is_matrix:
        raise ParamLowRankValueError(
            "sweep_pod needs an ensemble-valued family, use sweep_svd"
        )
    _check_member_rank(f, values[0], n)
    if printer:
        printer(
            f"Sweeping POD over {len(values)} grid points",
            color=Color.BLUE,
            emoji="🔎",
        )

    def solve(xi: float) -> Tuple[Member, PodBasis]:
        member = f(xi)
        assert isinstance(member, Ensemble)
        return member, pod(member, n, gap_tol=gap_tol)

    results = map_grid(solve, values, workers)
    bases = [basis for _, basis in results]
    spectra = np.array([basis.eigenvalues for basis in bases])
    gaps, degenerate = _gap_flags(spectra, n, gap_tol)
    frames = [
        Frame(u=None, core=np.diag(basis.eigenvalues[:n]), v=np.array(basis.basis))
        for basis in bases
    ]
    return SweepResult(
        kind=POD,
        n=n,
        grid=values,
        members=[member for member, _ in results],
        spectra=spectra,
        gaps=gaps,
        degenerate=degenerate,
        frames=frames,
        gap_tol=gap_tol,
        bases=bases,
        family=f,
    )


def _leading_subspace(s: SweepResult, k: int, n: int) -> Matrix:
    if n == s.n:
        return s.frames[k].v
    if s.kind == SVD:
        return np.array(svd(s.members[k]).v[:, :n])
    if n > s.n:
        raise ParamLowRankValueError(
            f"n={n} exceeds the rank {s.n} this ensemble sweep was computed for"
        )
    return s.frames[k].v[:, :n]


def _check_report_rank(s: SweepResult, n: Optional[int]) -> int:
    n = s.n if n is None else _check_n(n)
    if n > s.spectra.shape[1]:
        raise ParamLowRankValueError(
            f"n={n} exceeds the spectrum length {s.spectra.shape[1]}"
        )
    return n


def _min_cosine(first: Matrix, second: Matrix) -> float:
    return float(np.min(np.linalg.svd(first.T @ second, compute_uv=False)))


def _subspace_at(s: SweepResult, xi: float, n: int) -> Matrix:
    assert s.family is not None
    member = s.family(xi)
    if s.kind == SVD:
        return np.array(svd(member).v[:, :n])
    assert isinstance(member, Ensemble)
    return np.array(pod(member, n).basis)


def _turn_persists(
    s: SweepResult,
    n: int,
    interval: Tuple[float, float],
    ends: Tuple[Matrix, Matrix],
    depth: int = 0,
) -> bool:
    """Whether the rank-n subspace still turns by 45 degrees on a refined grid.

    A smooth rotation is spread over the interval and vanishes under
    bisection; a swap of σ_n and σ_{n+1} stays inside one half.
    """
    if _min_cosine(*ends) >= CROSSING_COSINE:
        return False
    if s.family is None or depth == MAX_CROSSING_BISECTIONS:
        return True
    left, right = interval
    middle = 0.5 * (left + right)
    try:
        v_middle = _subspace_at(s, middle, n)
    except ParamLowRankError:
        # Grid families have no members between grid points.
        return True
    return _turn_persists(
        s, n, (left, middle), (ends[0], v_middle), depth + 1
    ) or _turn_persists(s, n, (middle, right), (v_middle, ends[1]), depth + 1)


def gap_report(s: SweepResult, n: Optional[int] = None) -> GapReport:
    """Report the rank-n spectral gap along a sweep.

    The gap itself is nonnegative at every point, so a crossing of σ_n and
    σ_{n+1} is read off the optimal rank-n subspaces. An interval is
    suspected when the subspace turns by more than 45 degrees between its
    ends (the smallest principal cosine drops below 1/√2) and the turn
    persists when the interval is bisected through the family, down to
    2^-12 of its length. Intervals of grid families cannot be refined and are
    reported on the first test alone.

    Args:
        s: A sweep.
        n: The rank, defaults to the sweep rank.

    Returns:
        One row per grid point plus the suspected crossing intervals.
    """
    n = _check_report_rank(s, n)
    gaps, degenerate = _gap_flags(s.spectra, n, s.gap_tol)
    scale = np.maximum(s.spectra[:, 0], np.finfo(float).tiny)
    rows = [
        GapRow(
            xi=float(xi),
            gap=float(gap),
            relative_gap=float(gap / top),
            degenerate=bool(flag),
        )
        for xi, gap, top, flag in zip(s.grid, gaps, scale, degenerate)
    ]

    crossings = []
    if n < s.spectra.shape[1]:
        previous = _leading_subspace(s, 0, n)
        for k in range(1, len(s.grid)):
            current = _leading_subspace(s, k, n)
            interval = (float(s.grid[k - 1]), float(s.grid[k]))
            if _turn_persists(s, n, interval, (previous, current)):
                crossings.append(interval)
            previous = current
    return GapReport(n=n, gap_tol=s.gap_tol, rows=rows, crossings=crossings)


def _check_symmetric_psd(s: SweepResult) -> None:
    if s.kind != SVD:
        return
    for xi, member in zip(s.grid, s.members):
        if not is_symmetric(member):
            raise ParamLowRankValueError(
                f"Projector paths need symmetric members, xi={float(xi)!r} is not symmetric"
            )
        values = sym_eig(member).values
        if values[-1] < -1e-12 * max(1.0, abs(float(values[0]))):
            raise ParamLowRankValueError(
                f"Projector paths need positive semidefinite members, xi={float(xi)!r} "
                f"has eigenvalue {float(values[-1])!r}"
            )


def hs_increments(matrices: Sequence[Matrix]) -> Vector:
    """Return ‖M_{k+1} − M_k‖_HS for consecutive matrices."""
    return np.array(
        [
            float(np.linalg.norm(matrices[k + 1] - matrices[k], "fro"))
            for k in range(len(matrices) - 1)
        ]
    )


def projector_path(s: SweepResult, n: Optional[int] = None) -> ProjectorPath:
    """Build the path of projectors P_ξ = V_ξ·V_ξᵀ onto the optimal subspaces.

    For a sweep of symmetric positive semidefinite matrices V_ξ holds the top-n
    eigenvectors; for a POD sweep it is the POD basis. The path is certified
    continuous when no grid point has a degenerate gap.

    Args:
        s: An SVD sweep of symmetric positive semidefinite matrices or a POD
            sweep.
        n: The rank, defaults to the sweep rank.

    Raises:
        ParamLowRankValueError: Raised when an SVD sweep has a non-symmetric or
            indefinite member.

    Returns:
        The projector path.
    """
    n = _check_report_rank(s, n)
    _check_symmetric_psd(s)
    _, degenerate = _gap_flags(s.spectra, n, s.gap_tol)

    projectors = []
    for k in range(len(s.grid)):
        v = _leading_subspace(s, k, n)
        projector = v @ v.T
        projectors.append(0.5 * (projector + projector.T))
    return ProjectorPath(
        n=n,
        grid=s.grid.copy(),
        projectors=projectors,
        hs_increments=hs_increments(projectors),
        continuity_certified=not bool(degenerate.any()),
        degenerate_xis=grid_list(s.grid[degenerate]),
    )


def align_frames(s: SweepResult) -> SweepResult:
    """Rotate every frame onto its left neighbour, anchored at the first grid point.

    Frame k+1 is replaced by (U·Q, Qᵀ·core·Q, V·Q) with Q the orthogonal
    Procrustes solution, the polar factor of the cross-Gram V_{k+1}ᵀ·V_k.
    The approximant and the spans do not change. When the cross-Gram is
    (numerically) singular the consecutive subspaces are orthogonal in some
    direction, no rotation is meaningful, and the step is recorded in
    `alignment_skipped`.

    Args:
        s: A sweep.

    Returns:
        A new sweep with aligned frames.
    """
    frames = [s.frames[0]]
    skipped = []
    for k in range(1, len(s.frames)):
        frame = s.frames[k]
        factors = svd(frame.v.T @ frames[-1].v)
        if factors.sigma[-1] <= ALIGNMENT_TOL:
            frames.append(frame)
            skipped.append(k - 1)
            continue
        q = factors.u @ factors.v.T
        frames.append(
            Frame(
                u=None if frame.u is None else frame.u @ q,
                core=q.T @ frame.core @ q,
                v=frame.v @ q,
            )
        )
    return replace(s, frames=frames, aligned=True, alignment_skipped=skipped)


def reduce_rank(s: SweepResult, n: int) -> SweepResult:
    """Restrict a sweep to a rank n no larger than its own.

    The spectra are kept; gaps, flags and unaligned frames are rebuilt for
    rank n from the per-point decompositions.

    Args:
        s: A sweep, aligned or not.
        n: The new rank, 1 ≤ n ≤ s.n.

    Raises:
        ParamLowRankValueError: Raised when n is out of range.

    Returns:
        A new, unaligned sweep of rank n.
    """
    n = _check_n(n)
    if n > s.n:
        raise ParamLowRankValueError(f"n={n} exceeds the sweep rank {s.n}")
    gaps, degenerate = _gap_flags(s.spectra, n, s.gap_tol)
    bases: List[PodBasis] = []
    frames: List[Frame] = []
    if s.kind == SVD:
        for member in s.members:
            factors = svd(member)
            frames.append(
                Frame(
                    u=np.array(factors.u[:, :n]),
                    core=np.diag(factors.sigma[:n]),
                    v=np.array(factors.v[:, :n]),
                )
            )
    else:
        bases = [
            PodBasis(
                n=n,
                basis=np.array(basis.basis[:, :n]),
                eigenvalues=basis.eigenvalues,
                gap_degenerate=bool(flag),
            )
            for basis, flag in zip(s.bases, degenerate)
        ]
        frames = [
            Frame(u=None, core=np.diag(basis.eigenvalues[:n]), v=basis.basis)
            for basis in bases
        ]
    return replace(
        s,
        n=n,
        gaps=gaps,
        degenerate=degenerate,
        frames=frames,
        bases=bases,
        aligned=False,
        alignment_skipped=[],
    )


def approximant_increments(s: SweepResult) -> Vector:
    """Return ‖A_{ξ_{k+1},n} − A_{ξ_k,n}‖_HS along a sweep.

    For POD sweeps the approximants are the projectors onto the POD
    subspaces.

    Args:
        s: A sweep.

    Returns:
        One increment per grid step.
    """
    if s.kind == POD:
        return hs_increments([frame.projector() for frame in s.frames])
    return hs_increments([frame.approximant() for frame in s.frames])


def kkl_path(s: SweepResult, *, rank_tol: float = DEFAULT_RANK_TOL) -> KklPath:
    """Compute the KKL expansion X_ξ = Σ_i s_i(ξ)·η_{ξ,i}·v_i(ξ) of a POD sweep.

    Args:
        s: A POD sweep.
        rank_tol: Eigenvalues at or below rank_tol·λ₁ count as vanishing.

    Raises:
        ParamLowRankValueError: Raised for SVD sweeps.
        SweepError: Raised when some s_i(ξ) vanishes, naming ξ.

    Returns:
        The scale paths and per-point coefficients.
    """
    if s.kind != POD:
        raise ParamLowRankValueError("kkl_path needs a POD sweep")
    coefficients = []
    for xi, member, basis in zip(s.grid, s.members, s.bases):
        assert isinstance(member, Ensemble)
        try:
            coefficients.append(kkl_coefficients(member, basis, rank_tol=rank_tol))
        except ParamLowRankError as exc:
            raise SweepError(str(exc), xi=float(xi)) from exc
    return KklPath(
        grid=s.grid.copy(),
        scales=np.sqrt(s.spectra[:, : s.n]),
        coefficients=coefficients,
    )


def grid_argmin(
    objective: Objective,
    c_grid: Sequence[float],
    xi: float,
    *,
    tie_tol: float = ARGMIN_TIE_TOL,
) -> ArgminResult:
    """Minimize c ↦ J(ξ, c) over a finite grid.

    Values within tie_tol·max(1, |min|) of the minimum count as ties, and the
    lowest grid index among them wins, so the selector is deterministic.

    >>> from paramlowrank.families import cubic_objective
    >>> grid_argmin(cubic_objective, [-1.0, 0.0, 0.5, 1.0], 1.8).c_star
    -1.0

    Args:
        objective: The function J(ξ, c).
        c_grid: The candidate values of c.
        xi: The parameter value.
        tie_tol: Relative tolerance for ties.

    Raises:
        ParamLowRankValueError: Raised when the grid is empty or the objective
            is not finite on it.

    Returns:
        The selected minimizer, its value and its grid index.
    """
    candidates = np.asarray(c_grid, dtype=float).reshape(-1)
    if not len(candidates):
        raise ParamLowRankValueError("c_grid must not be empty")
    values = np.array([objective(xi, float(c)) for c in candidates], dtype=float)
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise ParamLowRankValueError(
            f"Objective is not finite at c={float(candidates[bad])!r}, xi={xi!r}"
        )
    best = float(np.min(values))
    index = int(np.flatnonzero(values <= best + tie_tol * max(1.0, abs(best)))[0])
    return ArgminResult(
        c_star=float(candidates[index]), value=float(values[index]), index=index
    )


def argmin_path(
    objective: Objective, c_grid: Sequence[float], xi_grid: Sequence[float]
) -> ArgminPath:
    """Run grid_argmin at every point of a parameter grid.

    The minimum value ξ ↦ min_c J(ξ, c) stays continuous even where the
    selected minimizer jumps between branches.

    Args:
        objective: The function J(ξ, c).
        c_grid: The candidate values of c.
        xi_grid: The parameter values.

    Returns:
        The minimizer and minimum-value paths.
    """
    values = validate_grid(xi_grid, min_count=1)
    results = [grid_argmin(objective, c_grid, float(xi)) for xi in values]
    return ArgminPath(
        grid=values,
        c_star=np.array([result.c_star for result in results]),
        values=np.array([result.value for result in results]),
    )
