"""Seeded property suites for the whole toolkit.

Every suite draws from one shared `numpy.random.Generator`, so a run is
reproducible from its seed. Suites never raise on a violated property;
they count it and keep the first messages for the report.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from paramlowrank.families import (
    HEAT3,
    ROT2,
    ParamFamily,
    builtin_family,
    cubic_objective,
)
from paramlowrank.linalg_core import (
    frobenius_norm,
    hs_inner,
    operator_norm,
    orthonormality_defect,
    schatten_norm,
    svd,
    sym_eig,
)
from paramlowrank.lowrank import (
    best_approximation,
    capped_simplex_grid_max,
    capped_simplex_max,
    eckart_young_residuals,
    frame_energy,
    truncate,
    von_neumann_slack,
)
from paramlowrank.parametric import (
    align_frames,
    approximant_increments,
    argmin_path,
    gap_report,
    grid_argmin,
    projector_path,
    sweep_pod,
    sweep_svd,
)
from paramlowrank.printer import Color, Printer
from paramlowrank.sampling import (
    random_coupled_ensemble,
    random_ensemble,
    random_matrix,
    random_orthonormal_frame,
    random_orthoprojector,
    random_rank_n,
    random_shape,
    random_smooth_family,
    random_symmetric,
)
from paramlowrank.stochastic import (
    CoupledEnsemble,
    covariance,
    covariance_perturbation,
    kkl_coefficients,
    pod,
    pod_residual,
    projection_error,
    projection_error_identity,
)
from paramlowrank.surrogate import (
    FACTORS,
    PROJECTOR,
    CertReport,
    SurrogateModel,
    certify,
    eval_projector,
    fit_factors,
    fit_projector,
)
from paramlowrank.types import Vector

MAX_MESSAGES = 5
REFINEMENT_RATIO = 0.75
TRAINING_STEPS = (0.1, 0.02, 0.004)
EPSILONS = (0.1, 0.01)


@dataclass
class SuiteResult:
    """The outcome of one property suite.

    `worst` is the largest observed (measured − bound) over all bounded
    checks, so it is ≤ 0 when every bounded check passed.
    """

    name: str
    checks: int = 0
    failures: int = 0
    worst: float = -math.inf
    messages: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Whether no check failed."""
        return self.failures == 0

    def check(self, measured: float, bound: float, what: str) -> None:
        """Record the check measured ≤ bound."""
        self.checks += 1
        self.worst = max(self.worst, float(measured) - float(bound))
        if not measured <= bound:
            self._fail(f"{what}: {float(measured)!r} > {float(bound)!r}")

    def expect(self, condition: bool, what: str) -> None:
        """Record a check without a numeric bound."""
        self.checks += 1
        if not condition:
            self._fail(what)

    def _fail(self, message: str) -> None:
        self.failures += 1
        if len(self.messages) < MAX_MESSAGES:
            self.messages.append(message)

    def compile(self) -> Dict[str, Any]:  # noqa: A003
        """Compile the result to a JSON-ready dictionary.

        Returns:
            The counts, the worst margin and the first failure messages.
        """
        return {
            "name": self.name,
            "checks": self.checks,
            "failures": self.failures,
            "passed": self.passed,
            "worst": self.worst if math.isfinite(self.worst) else None,
            "messages": list(self.messages),
        }


def _count(base: int, scale: float) -> int:
    return max(1, int(round(base * scale)))


def _steps_grid(low: float, high: float, step: float) -> Vector:
    return np.linspace(low, high, int(round((high - low) / step)) + 1)


def linalg_core_suite(rng: np.random.Generator, scale: float) -> SuiteResult:
    """Check SVD, eigendecomposition and norms on random matrices."""
    result = SuiteResult("linalg_core")
    for _ in range(_count(100, scale)):
        rows, cols = random_shape(rng)
        a = random_matrix(rng, rows, cols)
        size = max(1.0, frobenius_norm(a))
        factors = svd(a)
        result.check(
            frobenius_norm(a - factors.reconstruct()),
            1e-12 * size,
            "svd reconstruction",
        )
        result.check(orthonormality_defect(factors.u), 1e-12, "orthonormal U")
        result.check(orthonormality_defect(factors.v), 1e-12, "orthonormal V")
        result.expect(
            bool(np.all(np.diff(factors.sigma) <= 0.0)), "sigma nonincreasing"
        )
        again = svd(a)
        result.expect(
            np.array_equal(again.u, factors.u)
            and np.array_equal(again.sigma, factors.sigma)
            and np.array_equal(again.v, factors.v),
            "svd is deterministic",
        )

        gram_values = sym_eig(a.T @ a).values[: len(factors.sigma)]
        result.check(
            float(np.max(np.abs(gram_values - factors.sigma ** 2))),
            1e-9,
            "eigenvalues of AᵀA against σ²",
        )

        s1, s2 = schatten_norm(a, 1), schatten_norm(a, 2)
        result.expect(
            float(factors.sigma[0]) <= s2 * (1 + 1e-12) and s2 <= s1 * (1 + 1e-12),
            "Schatten norms nonincreasing in p",
        )
        fro = frobenius_norm(a)
        result.check(
            abs(s2 - fro), 1e-12 * max(1.0, fro), "Schatten-2 against Frobenius"
        )

        b = random_matrix(rng, rows, cols)
        result.check(
            abs(hs_inner(a, b) - float(np.sum(a * b))),
            1e-12 * max(1.0, fro * frobenius_norm(b)),
            "HS inner product against entrywise sum",
        )

        sym = random_symmetric(rng, rows)
        eig = sym_eig(sym)
        residual = sym @ eig.vectors - eig.vectors * eig.values
        result.check(
            frobenius_norm(residual),
            1e-10 * max(1.0, frobenius_norm(sym)),
            "eigendecomposition residual",
        )

    # Upper bound from raw unit vectors, lower bound after power iteration.
    a = random_matrix(rng, 4)
    norm = operator_norm(a)
    x = rng.standard_normal((_count(10_000, scale), 4))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    result.check(
        float(np.max(np.linalg.norm(x @ a.T, axis=1))),
        norm * (1 + 1e-12),
        "operator norm bounds ‖Ax‖",
    )
    for _ in range(10):
        x = x @ (a.T @ a)
        x /= np.linalg.norm(x, axis=1, keepdims=True)
    result.check(
        0.999 * norm,
        float(np.max(np.linalg.norm(x @ a.T, axis=1))),
        "operator norm is attained",
    )
    return result


def branching_suite(rng: np.random.Generator, scale: float) -> SuiteResult:
    """Check the diagonal crossing family and gap flags on smooth families."""
    result = SuiteResult("branching")
    family = builtin_family("diag2")
    grid = np.linspace(0.0, 1.0, 101)
    s = sweep_svd(family, grid, 1)
    result.check(
        float(np.max(np.abs(s.spectra[:, 0] - np.maximum(grid, 1.0 - grid)))),
        1e-12,
        "σ₁ of diag2",
    )
    result.check(
        float(np.max(np.abs(s.spectra[:, 1] - np.minimum(grid, 1.0 - grid)))),
        1e-12,
        "σ₂ of diag2",
    )
    result.expect(s.degenerate_xis == [0.5], f"degenerate points {s.degenerate_xis}")

    path = projector_path(s)
    jumps = np.flatnonzero(path.hs_increments > 1e-12)
    result.expect(len(jumps) == 1, f"projector jumps at {grid[jumps].tolist()}")
    if len(jumps) == 1:
        k = int(jumps[0])
        result.check(
            abs(float(path.hs_increments[k]) - math.sqrt(2.0)), 1e-10, "jump size √2"
        )
        result.expect(grid[k] <= 0.5 <= grid[k + 1], "jump brackets ξ = 0.5")
    result.expect(not path.continuity_certified, "diag2 path is not certified")
    norms = [frobenius_norm(projector) for projector in path.projectors]
    result.check(float(np.max(np.abs(np.array(norms) - 1.0))), 1e-10, "‖P‖_HS = 1")

    report = gap_report(s)
    result.expect(len(report.crossings) == 1, f"crossings {report.crossings}")
    for step in (0.1, 0.05, 0.025, 0.0125):
        coarse = projector_path(sweep_svd(family, _steps_grid(0.0, 1.0, step), 1))
        result.check(
            1.0, float(np.max(coarse.hs_increments)), f"jump survives step {step}"
        )

    for _ in range(_count(20, scale)):
        dim = int(rng.integers(2, 6))
        smooth = random_smooth_family(rng, dim)
        n = int(rng.integers(1, dim))
        result.check(0.2 - 1e-12, smooth.min_gap(n), "smooth family gap")
        sweep = sweep_svd(smooth, np.linspace(0.0, 1.0, 21), n)
        smooth_report = gap_report(sweep)
        result.expect(
            not smooth_report.degenerate_xis and not smooth_report.crossings,
            "smooth family has no degenerate points or crossings",
        )
    return result


def argmin_suite(rng: np.random.Generator, scale: float) -> SuiteResult:
    """Check the grid argmin selector on the cubic objective."""
    result = SuiteResult("argmin")
    c_grid = np.linspace(-1.0, 1.0, 2001)
    for xi in (1.0, 1.05, 1.1):
        found = grid_argmin(cubic_objective, c_grid, xi)
        result.check(
            abs(found.c_star - 1.0 / (math.sqrt(3.0) * xi)),
            1e-3,
            f"interior argmin {xi}",
        )
    for xi in (1.2, 1.5, 2.0):
        found = grid_argmin(cubic_objective, c_grid, xi)
        result.expect(found.c_star == -1.0, f"boundary argmin at {xi}: {found.c_star}")

    tie = 2.0 / math.sqrt(3.0)
    found = grid_argmin(cubic_objective, c_grid, tie)
    result.expect(found.index == 0, f"tie picks the lowest index, got {found.index}")
    positive = c_grid[c_grid > 0]
    interior = min(cubic_objective(tie, float(c)) for c in positive)
    result.check(abs(interior - found.value), 1e-3, "both branches minimal at the tie")

    path = argmin_path(cubic_objective, c_grid, np.linspace(1.0, 2.0, 101))
    low, high, jump = path.largest_jump()
    result.expect(low <= tie <= high, f"argmin jumps in [{low}, {high}]")
    result.check(1.0, jump, "argmin jump size")
    result.check(
        float(np.max(np.abs(np.diff(path.values)))), 0.2, "minimum value continuous"
    )
    return result


def eckart_young_suite(rng: np.random.Generator, scale: float) -> SuiteResult:
    """Check optimal truncation errors and optimality against competitors."""
    result = SuiteResult("eckart_young")
    for _ in range(_count(500, scale)):
        rows, cols = random_shape(rng)
        a = random_matrix(rng, rows, cols)
        factors = svd(a)
        size = max(1.0, frobenius_norm(a))
        for n in range(0, min(rows, cols) + 1):
            approx = truncate(factors, n)
            op, hs = eckart_young_residuals(a, approx)
            tail = factors.sigma[n:]
            result.check(
                abs(op - (float(tail[0]) if len(tail) else 0.0)),
                1e-10 * size,
                "operator error is σ_{n+1}",
            )
            result.check(
                abs(hs * hs - float(np.sum(tail * tail))),
                1e-10 * size * size,
                "squared HS error is the tail sum",
            )
            result.check(
                abs(approx.op_error - op), 1e-10 * size, "reported operator error"
            )
    competitors = _count(1000, scale)
    for _ in range(_count(50, scale)):
        rows, cols = random_shape(rng)
        a = random_matrix(rng, rows, cols)
        n = int(rng.integers(1, min(rows, cols) + 1))
        approx = best_approximation(a, n)
        stack = np.stack(
            [random_rank_n(rng, rows, cols, n) for _ in range(competitors)]
        )
        residuals = a[None, :, :] - stack
        ops = np.linalg.svd(residuals, compute_uv=False)[:, 0]
        hss = np.sqrt(np.sum(residuals * residuals, axis=(1, 2)))
        slack = 1e-10 * max(1.0, frobenius_norm(a))
        result.check(
            approx.op_error, float(np.min(ops)) + slack, "beats competitors (op)"
        )
        result.check(
            approx.frob_error, float(np.min(hss)) + slack, "beats competitors (HS)"
        )
    return result


def uniqueness_suite(rng: np.random.Generator, scale: float) -> SuiteResult:
    """Check that near-optimal rank-n matrices are close to A_n under a gap."""
    result = SuiteResult("uniqueness")
    done = 0
    while done < _count(50, scale):
        rows, cols = random_shape(rng)
        if min(rows, cols) < 2:
            continue
        a = random_matrix(rng, rows, cols)
        factors = svd(a)
        n = int(rng.integers(1, min(rows, cols)))
        if factors.sigma[n - 1] - factors.sigma[n] < 0.1:
            continue
        done += 1
        approx = truncate(factors, n)
        u = approx.factors.u
        v = approx.factors.v
        core = np.diag(approx.factors.sigma)
        candidates = [approx.approx]
        for delta in (1e-9, 1e-3):
            candidates.append(
                (u + delta * rng.standard_normal(u.shape))
                @ core
                @ (v + delta * rng.standard_normal(v.shape)).T
            )
        candidates += [
            random_rank_n(rng, rows, cols, n) for _ in range(_count(100, scale))
        ]
        for candidate in candidates:
            if frobenius_norm(a - candidate) <= approx.frob_error + 1e-12:
                result.check(
                    frobenius_norm(candidate - approx.approx),
                    1e-6,
                    "near-optimal competitor is close to A_n",
                )
    return result


def lipschitz_suite(rng: np.random.Generator, scale: float) -> SuiteResult:
    """Check |σ_n(A) − σ_n(B)| ≤ ‖A − B‖ on random pairs."""
    result = SuiteResult("lipschitz")
    for _ in range(_count(10_000, scale)):
        rows, cols = random_shape(rng)
        a = random_matrix(rng, rows, cols)
        b = a + 10.0 ** rng.uniform(-6.0, 0.0) * random_matrix(rng, rows, cols)
        distance = float(np.linalg.norm(a - b, 2))
        spread = np.abs(svd(a).sigma - svd(b).sigma)
        result.check(float(np.max(spread)), distance + 1e-10, "σ_n is 1-Lipschitz")
    return result


def pod_suite(rng: np.random.Generator, scale: float) -> SuiteResult:
    """Check covariance, POD and KKL identities on random ensembles."""
    result = SuiteResult("pod")
    for _ in range(_count(200, scale)):
        dim = int(rng.integers(1, 7))
        size = int(rng.integers(dim, 41))
        e = random_ensemble(rng, dim, size)
        moment = e.second_moment()
        size_bound = max(1.0, moment)
        c = covariance(e)
        result.check(
            abs(float(np.trace(c)) - moment),
            1e-12 * size_bound,
            "trace of C is 𝔼‖X‖²",
        )

        n = int(rng.integers(1, dim + 1))
        basis = pod(e, n)
        result.check(
            abs(pod_residual(e, basis) - basis.tail()),
            1e-10 * size_bound,
            "POD residual is the eigenvalue tail",
        )
        for _ in range(_count(10, scale)):
            p = random_orthoprojector(rng, dim, n)
            direct = projection_error(e, p)
            result.check(
                abs(direct - projection_error_identity(e, p)),
                1e-10 * size_bound,
                "projection error identity",
            )
            result.check(
                basis.tail(), direct + 1e-10 * size_bound, "POD beats random projectors"
            )

        values = basis.eigenvalues
        if values[n - 1] >= 1e-4 * values[0]:
            eta = kkl_coefficients(e, basis)
            gram = eta.T @ (e.weights[:, None] * eta)
            result.check(
                float(np.max(np.abs(gram - np.eye(n)))), 1e-10, "KKL coefficients white"
            )
    return result


def spectral_inequalities_suite(rng: np.random.Generator, scale: float) -> SuiteResult:
    """Check the capped simplex program and the trace and covariance bounds."""
    result = SuiteResult("spectral_inequalities")
    for _ in range(_count(100, scale)):
        length = int(rng.integers(1, 7))
        lam = np.sort(rng.uniform(0.0, 5.0, size=length))[::-1]
        n = int(rng.integers(0, length + 1))
        exact = capped_simplex_max(lam, n)
        grid = capped_simplex_grid_max(lam, n)
        result.check(grid.value, exact.value + 1e-12, "greedy is a maximizer")
        result.check(
            exact.value - grid.value, n * 0.05 * float(lam[0]), "grid search close"
        )

    a = random_matrix(rng, 4)
    energy_bound = float(np.sum(svd(a).sigma[:2] ** 2))
    for _ in range(_count(500, scale)):
        frame = random_orthonormal_frame(rng, 4, 2).T
        result.check(frame_energy(a, frame), energy_bound + 1e-10, "frame energy bound")

    for _ in range(_count(200, scale)):
        result.check(
            -von_neumann_slack(random_matrix(rng, 4), random_matrix(rng, 4)),
            1e-10,
            "von Neumann trace inequality",
        )

    for _ in range(_count(200, scale)):
        ce = random_coupled_ensemble(rng, 3, int(rng.integers(1, 11)))
        bound = covariance_perturbation(ce)
        result.check(
            bound.lhs,
            bound.rhs + 1e-10 * max(1.0, bound.rhs),
            "covariance perturbation",
        )
    example = covariance_perturbation(CoupledEnsemble([[1.0]], [[2.0]], [1.0]))
    result.check(abs(example.lhs - 3.0), 1e-12, "trace norm of ΔC for Z' = 2Z")
    result.check(abs(example.rhs - 3.0), 1e-12, "bound for Z' = 2Z")
    return result


def _max_projector_increment(family: ParamFamily, n: int, step: float) -> float:
    low, high = family.domain
    path = projector_path(sweep_svd(family, _steps_grid(low, high, step), n))
    return float(np.max(path.hs_increments))


def continuity_suite(rng: np.random.Generator, scale: float) -> SuiteResult:
    """Check that path increments shrink when the grid is refined."""
    result = SuiteResult("continuity")
    for family, n in ((HEAT3, 1), (HEAT3, 2), (ROT2, 1)):
        low, high = family.domain
        for step in (0.1, 0.05, 0.025):
            coarse = _max_projector_increment(family, n, step)
            fine = _max_projector_increment(family, n, step / 2)
            result.check(
                fine, REFINEMENT_RATIO * coarse, f"{family.family_id} increments shrink"
            )
            sweep = sweep_svd(family, _steps_grid(low, high, step), n)
            path = projector_path(sweep)
            result.expect(path.continuity_certified, f"{family.family_id} certified")
            norms = np.array([frobenius_norm(p) for p in path.projectors])
            result.check(
                float(np.max(np.abs(norms - math.sqrt(n)))), 1e-10, "‖P‖_HS = √n"
            )
            refined = sweep_svd(family, _steps_grid(low, high, step / 2), n)
            result.check(
                float(np.max(approximant_increments(refined))),
                REFINEMENT_RATIO * float(np.max(approximant_increments(sweep))),
                f"{family.family_id} approximant increments shrink",
            )

    for _ in range(_count(10, scale)):
        dim = int(rng.integers(2, 6))
        family = random_smooth_family(rng, dim)
        n = int(rng.integers(1, dim))
        sweep = sweep_svd(family, np.linspace(0.0, 1.0, 41), n)
        aligned = align_frames(sweep)
        result.expect(not aligned.alignment_skipped, "alignment never skipped")
        for before, after in zip(sweep.frames, aligned.frames):
            result.check(
                frobenius_norm(before.projector() - after.projector()),
                1e-12,
                "alignment keeps spans",
            )
            result.check(
                frobenius_norm(before.approximant() - after.approximant()),
                1e-10 * max(1.0, frobenius_norm(before.approximant())),
                "alignment keeps approximants",
            )
        moves = [
            frobenius_norm(aligned.frames[k + 1].v - aligned.frames[k].v)
            for k in range(len(aligned.frames) - 1)
        ]
        increments = projector_path(sweep).hs_increments
        result.check(
            max(moves), 10.0 * float(np.max(increments)), "aligned frames move slowly"
        )
    return result


def _fit(family: ParamFamily, target: str, n: int, grid: Vector) -> SurrogateModel:
    if family.is_matrix:
        s = sweep_svd(family, grid, n)
    else:
        s = sweep_pod(family, grid, n)
    if target == FACTORS:
        return fit_factors(align_frames(s))
    return fit_projector(s)


def _test_grid(family: ParamFamily, count: int) -> Vector:
    low, high = family.domain
    return np.linspace(low, high, count)


SURROGATE_CASES: Sequence[Tuple[str, str, int]] = (
    ("heat3", PROJECTOR, 1),
    ("heat3", FACTORS, 1),
    ("rot2", FACTORS, 1),
    ("heat3-cloud", PROJECTOR, 1),
)


def surrogate_suite(rng: np.random.Generator, scale: float) -> SuiteResult:
    """Check that certified families reach every target excess on a refined grid."""
    result = SuiteResult("surrogate")
    test_count = max(20, _count(200, scale))

    diag2 = builtin_family("diag2")
    model = fit_projector(sweep_svd(diag2, np.linspace(0.0, 0.4, 5), 1))
    report = certify(model, diag2, np.linspace(0.0, 0.4, test_count), 0.01)
    result.check(report.max_excess, 1e-12, "diag2 surrogate is optimal")
    result.check(
        max(abs(row.achieved - row.xi) for row in report.rows),
        1e-12,
        "diag2 achieved error is ξ",
    )

    for family_id, target, n in SURROGATE_CASES:
        family = builtin_family(family_id)
        low, high = family.domain
        test_grid = _test_grid(family, test_count)
        reports: List[CertReport] = []
        for step in TRAINING_STEPS:
            model = _fit(family, target, n, _steps_grid(low, high, step))
            reports.append(certify(model, family, test_grid, max(EPSILONS)))
            own = certify(model, family, model.train_grid, max(EPSILONS))
            result.check(
                own.max_excess, 1e-10, f"{family_id} exact on its training grid"
            )
        for report in reports:
            result.check(
                -report.min_excess, 1e-10, f"{family_id} never beats the optimum"
            )
        for epsilon in EPSILONS:
            best = min(report.max_excess for report in reports)
            result.check(best, epsilon, f"{family_id} {target} reaches ε={epsilon}")

    heat3 = builtin_family("heat3")
    test_grid = _test_grid(heat3, test_count)
    coarse = _fit(heat3, PROJECTOR, 1, _steps_grid(0.0, 1.0, 0.1))
    fine = _fit(heat3, PROJECTOR, 1, _steps_grid(0.0, 1.0, 0.05))
    result.check(
        certify(fine, heat3, test_grid, 1.0).max_excess,
        certify(coarse, heat3, test_grid, 1.0).max_excess + 1e-12,
        "refining the training grid does not hurt",
    )
    grid = coarse.train_grid
    for k in range(len(grid) - 1):
        middle = eval_projector(coarse, 0.5 * (grid[k] + grid[k + 1]))
        step = frobenius_norm(coarse.projectors[k + 1] - coarse.projectors[k])
        result.check(
            frobenius_norm(middle - coarse.projectors[k]),
            2.0 * step,
            "midpoint stays near its neighbours",
        )

    rot2 = builtin_family("rot2")
    model = _fit(rot2, FACTORS, 1, _steps_grid(0.1, 1.0, 0.01))
    offsets = rng.uniform(0.1, 1.0, size=_count(100, scale))
    report = certify(model, rot2, np.unique(offsets), 1.0)
    for row in report.rows:
        result.check(row.achieved, row.optimal + 0.1, "rot2 fine surrogate off grid")
    return result


Suite = Callable[[np.random.Generator, float], SuiteResult]

SUITES: Dict[str, Suite] = {
    "linalg_core": linalg_core_suite,
    "branching": branching_suite,
    "argmin": argmin_suite,
    "eckart_young": eckart_young_suite,
    "uniqueness": uniqueness_suite,
    "lipschitz": lipschitz_suite,
    "pod": pod_suite,
    "spectral_inequalities": spectral_inequalities_suite,
    "continuity": continuity_suite,
    "surrogate": surrogate_suite,
}


def run_suites(
    seed: int = 0,
    scale: float = 1.0,
    printer: Optional[Printer] = None,
    only: Optional[Sequence[str]] = None,
) -> List[SuiteResult]:
    """Run the property suites from a single seeded generator.

    Args:
        seed: Seed of the shared random generator.
        scale: Multiplier on every random sample count, in (0, 1] for quick
            runs. Deterministic checks are never scaled.
        printer: Receives one line per suite.
        only: Names of the suites to run, in registry order. Defaults to all.

    Raises:
        ValueError: Raised when scale is not positive or a suite name is
            unknown.

    Returns:
        The results in registry order.
    """
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale!r}")
    names = list(SUITES) if only is None else [name for name in SUITES if name in only]
    if only is not None and (unknown := sorted(set(only) - set(SUITES))):
        raise ValueError(f"Unknown suites {unknown}, expected some of {list(SUITES)}")

    rng = np.random.default_rng(seed)
    results = []
    for name in names:
        result = SUITES[name](rng, scale)
        if printer:
            if result.passed:
                printer(
                    f"{name}: {result.checks} checks passed",
                    color=Color.GREEN,
                    emoji="✅",
                )
            else:
                printer(
                    f"{name}: {result.failures} of {result.checks} checks failed",
                    color=Color.RED,
                    emoji="❌",
                )
                for message in result.messages:
                    printer(f"  {message}", color=Color.RED)
        results.append(result)
    return results


def verification_report(
    results: Sequence[SuiteResult], *, seed: int, scale: float
) -> Dict[str, Any]:
    """Compile suite results into JSON-ready report content."""
    return {
        "seed": seed,
        "scale": scale,
        "passed": all(result.passed for result in results),
        "suites": [result.compile() for result in results],
    }
