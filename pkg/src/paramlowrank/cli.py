"""Command-line front end.

Every subcommand computes first and writes its artifacts at the end, so a
failing run leaves no partial output behind. Exit status is 0 on success,
1 on invalid input or a failed computation and 2 when verification fails.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, NoReturn, Optional, Sequence, Tuple

import numpy as np

from paramlowrank.errors import (
    ParamLowRankError,
    ParamLowRankValueError,
    VerificationError,
)
from paramlowrank.families import (
    BUILTIN_OBJECTIVES,
    GridFamily,
    ParamFamily,
    builtin_family,
    family_from_json,
)
from paramlowrank.grid import MIN_GRID_COUNT, GridSpec, grid_list
from paramlowrank.linalg_core import DEFAULT_RANK_TOL
from paramlowrank.lowrank import DEFAULT_GAP_TOL
from paramlowrank.parametric import (
    SweepResult,
    align_frames,
    argmin_path,
    gap_report,
    projector_path,
    sweep_pod,
    sweep_svd,
)
from paramlowrank.printer import Color, Printer
from paramlowrank.reports import argmin_table, sweep_table, write_csv, write_report
from paramlowrank.surrogate import (
    FACTORS,
    PROJECTOR,
    certify,
    fit_factors,
    fit_projector,
)
from paramlowrank.verification import run_suites, verification_report

COMMANDS = ("sweep", "pod", "gap", "surrogate", "verify", "demo")
DEMOS = ("diag2", "cubic")
DEFAULT_GRID_COUNT = 101
DEFAULT_TEST_COUNT = 200
DEFAULT_EPSILON = 0.01
CUBIC_C_GRID = np.linspace(-1.0, 1.0, 2001)
CUBIC_XI_GRID = "1:2:101"

Artifacts = List[Tuple[str, Any]]


@dataclass
class RunConfig:
    """Validated options of one command-line run."""

    command: str
    input: Optional[Path] = None  # noqa: A003
    family: Optional[str] = None
    n: int = 1
    grid: Optional[GridSpec] = None
    gap_tol: float = DEFAULT_GAP_TOL
    rank_tol: float = DEFAULT_RANK_TOL
    epsilon: float = DEFAULT_EPSILON
    out: Path = Path(".")
    seed: int = 0
    workers: Optional[int] = None
    colorful: bool = False
    test_grid: Optional[GridSpec] = None
    target: str = PROJECTOR
    demo: Optional[str] = None
    scale: float = 1.0
    printer: Printer = field(default_factory=Printer, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ParamLowRankValueError(
                f"Unknown command {self.command!r}, expected one of {COMMANDS}"
            )
        if self.n < 1:
            raise ParamLowRankValueError(f"n must be at least 1, got {self.n}")
        for name in ("grid", "test_grid"):
            if (grid := getattr(self, name)) is not None and len(grid) < MIN_GRID_COUNT:
                raise ParamLowRankValueError(
                    f"{name} needs at least {MIN_GRID_COUNT} points, got {len(grid)}"
                )
        for name in ("gap_tol", "rank_tol", "epsilon", "scale"):
            if not getattr(self, name) > 0:
                raise ParamLowRankValueError(f"{name} must be positive")
        if self.workers is not None and self.workers < 1:
            raise ParamLowRankValueError(
                f"workers must be at least 1, got {self.workers}"
            )
        if self.target not in (PROJECTOR, FACTORS):
            raise ParamLowRankValueError(
                f"target must be {PROJECTOR!r} or {FACTORS!r}, got {self.target!r}"
            )
        if self.command == "demo" and self.demo not in DEMOS:
            raise ParamLowRankValueError(
                f"demo must be one of {DEMOS}, got {self.demo!r}"
            )
        if self.command in ("sweep", "pod", "gap", "surrogate") and (
            (self.input is None) == (self.family is None)
        ):
            raise ParamLowRankValueError(
                f"{self.command} needs exactly one of --input and --family"
            )

    def compile(self) -> Dict[str, Any]:  # noqa: A003
        """Compile the options that determine the results.

        Output location, threading and colours are left out so that the
        report content only depends on what was computed.

        Returns:
            The JSON-ready options.
        """
        return {
            "command": self.command,
            "input": None if self.input is None else str(self.input),
            "family": self.family,
            "n": self.n,
            "grid": None if self.grid is None else str(self.grid),
            "gap_tol": self.gap_tol,
            "rank_tol": self.rank_tol,
            "epsilon": self.epsilon,
            "seed": self.seed,
            "test_grid": None if self.test_grid is None else str(self.test_grid),
            "target": self.target,
            "demo": self.demo,
            "scale": self.scale,
        }

    def load_family(self) -> ParamFamily:
        """Return the family named by --family or read from --input."""
        if self.family is not None:
            return builtin_family(self.family)
        assert self.input is not None
        return family_from_json(self.input)

    def grid_for(self, family: ParamFamily) -> np.ndarray:
        """Return the sweep grid, defaulting to the family's own grid or domain."""
        if self.grid is not None:
            return self.grid.values()
        if isinstance(family, GridFamily):
            return family.xi.copy()
        low, high = family.domain
        return np.linspace(low, high, DEFAULT_GRID_COUNT)


class Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with status 1."""

    def error(self, message: str) -> NoReturn:
        """Raise instead of exiting with argparse's status 2.

        Args:
            message: The usage error.

        Raises:
            ParamLowRankValueError: Always.
        """
        raise ParamLowRankValueError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, default=Path("."), help="Output directory")
    parser.add_argument("--seed", type=int, default=0, help="Random seed")
    parser.add_argument("--workers", type=int, default=None, help="Worker threads")
    parser.add_argument("--colorful", action="store_true", help="Colour the output")


def _add_family(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", type=Path, default=None, help="Family JSON file")
    parser.add_argument("--family", default=None, help="Builtin family id")
    parser.add_argument("--n", type=int, default=1, help="Target rank")
    parser.add_argument("--grid", type=GridSpec, default=None, help="start:stop:count")
    parser.add_argument("--gap-tol", type=float, default=DEFAULT_GAP_TOL)
    parser.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)


def build_parser() -> Parser:
    """Build the command-line parser.

    Returns:
        The parser with one subcommand per workflow.
    """
    parser = Parser(
        prog="paramlowrank",
        description="Optimal low-rank approximation along a parameter",
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    for name, text in (
        ("sweep", "Optimal truncation at every grid point of a matrix family"),
        ("pod", "POD basis at every grid point of an ensemble family"),
        ("gap", "Spectral gap report with suspected crossings"),
    ):
        command = commands.add_parser(name, help=text)
        _add_family(command)
        _add_common(command)

    surrogate = commands.add_parser("surrogate", help="Fit and certify a surrogate")
    _add_family(surrogate)
    _add_common(surrogate)
    surrogate.add_argument("--eps", type=float, default=DEFAULT_EPSILON)
    surrogate.add_argument("--test-grid", type=GridSpec, default=None)
    surrogate.add_argument("--target", choices=(PROJECTOR, FACTORS), default=PROJECTOR)

    verify = commands.add_parser("verify", help="Run the property suites")
    _add_common(verify)
    verify.add_argument("--scale", type=float, default=1.0, help="Sample count factor")

    demo = commands.add_parser("demo", help="Write the data of a worked example")
    demo.add_argument("name", choices=DEMOS)
    demo.add_argument("--grid", type=GridSpec, default=None, help="start:stop:count")
    _add_common(demo)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parse command-line arguments into a validated RunConfig.

    Args:
        argv: The arguments, defaults to sys.argv[1:].

    Returns:
        The run configuration.
    """
    args = build_parser().parse_args(argv)
    return RunConfig(
        command=args.command,
        input=getattr(args, "input", None),
        family=getattr(args, "family", None),
        n=getattr(args, "n", 1),
        grid=getattr(args, "grid", None),
        gap_tol=getattr(args, "gap_tol", DEFAULT_GAP_TOL),
        rank_tol=getattr(args, "rank_tol", DEFAULT_RANK_TOL),
        epsilon=getattr(args, "eps", DEFAULT_EPSILON),
        out=args.out,
        seed=args.seed,
        workers=args.workers,
        colorful=args.colorful,
        test_grid=getattr(args, "test_grid", None),
        target=getattr(args, "target", PROJECTOR),
        demo=getattr(args, "name", None),
        scale=getattr(args, "scale", 1.0),
        printer=Printer(colorful=args.colorful),
    )


def _sweep(config: RunConfig, family: ParamFamily, grid: np.ndarray) -> SweepResult:
    if family.is_matrix:
        return sweep_svd(
            family,
            grid,
            config.n,
            gap_tol=config.gap_tol,
            rank_tol=config.rank_tol,
            workers=config.workers,
            printer=config.printer,
        )
    return sweep_pod(
        family,
        grid,
        config.n,
        gap_tol=config.gap_tol,
        workers=config.workers,
        printer=config.printer,
    )


def _cmd_sweep(config: RunConfig) -> Artifacts:
    family = config.load_family()
    if config.command == "pod" and family.is_matrix:
        raise ParamLowRankValueError("pod needs an ensemble-valued family")
    if config.command == "sweep" and not family.is_matrix:
        raise ParamLowRankValueError("sweep needs a matrix-valued family, use pod")
    s = _sweep(config, family, config.grid_for(family))
    content = {"config": config.compile(), "sweep": s.compile()}
    return [
        (f"{config.command}.csv", sweep_table(s)),
        (f"{config.command}.json", content),
    ]


def _cmd_gap(config: RunConfig) -> Artifacts:
    family = config.load_family()
    report = gap_report(_sweep(config, family, config.grid_for(family)))
    if report.crossings:
        config.printer(
            f"Suspected crossings in {report.crossings}",
            color=Color.YELLOW,
            emoji="⚠️",
        )
    return [("gap.json", {"config": config.compile(), "gap_report": report.compile()})]


def _cmd_surrogate(config: RunConfig) -> Artifacts:
    family = config.load_family()
    s = _sweep(config, family, config.grid_for(family))
    if config.target == FACTORS:
        model = fit_factors(align_frames(s))
    else:
        model = fit_projector(s)

    if config.test_grid is not None:
        test_grid = config.test_grid.values()
    elif isinstance(family, GridFamily):
        test_grid = family.xi.copy()
    else:
        test_grid = np.linspace(s.grid[0], s.grid[-1], DEFAULT_TEST_COUNT)
    report = certify(model, family, test_grid, config.epsilon, workers=config.workers)
    if report.passed:
        config.printer(
            f"Certified: max excess {report.max_excess:.3e} < {config.epsilon}",
            color=Color.GREEN,
            emoji="✅",
        )
    else:
        config.printer(
            f"Not certified: max excess {report.max_excess:.3e} ≥ {config.epsilon}",
            color=Color.YELLOW,
            emoji="⚠️",
        )
    content = {
        "config": config.compile(),
        "model": model.compile(),
        "certificate": report.compile(),
    }
    return [("surrogate.json", content)]


def _cmd_verify(config: RunConfig) -> Artifacts:
    results = run_suites(seed=config.seed, scale=config.scale, printer=config.printer)
    content = verification_report(results, seed=config.seed, scale=config.scale)
    table: List[List[Any]] = [["suite", "checks", "failures", "passed", "worst"]]
    for result in results:
        table.append(
            [
                result.name,
                result.checks,
                result.failures,
                "true" if result.passed else "false",
                result.compile()["worst"],
            ]
        )
    return [("verify.csv", table), ("verify.json", content)]


def _cmd_demo(config: RunConfig) -> Artifacts:
    if config.demo == "cubic":
        grid = (config.grid or GridSpec(CUBIC_XI_GRID)).values()
        path = argmin_path(BUILTIN_OBJECTIVES["cubic-argmin"], CUBIC_C_GRID, grid)
        low, high, jump = path.largest_jump()
        config.printer(f"Argmin jumps by {jump:.3f} between xi={low} and xi={high}")
        return [("cubic.csv", argmin_table(path))]

    family = builtin_family("diag2")
    s = _sweep(config, family, config.grid_for(family))
    path = projector_path(s)
    increments: List[List[Any]] = [["xi_left", "xi_right", "hs_increment"]]
    for k, increment in enumerate(path.hs_increments):
        increments.append([float(s.grid[k]), float(s.grid[k + 1]), float(increment)])
    config.printer(f"Degenerate gaps at xi={grid_list(s.grid[s.degenerate])}")
    return [("diag2.csv", sweep_table(s)), ("diag2_projector.csv", increments)]


COMMAND_HANDLERS: Dict[str, Callable[[RunConfig], Artifacts]] = {
    "sweep": _cmd_sweep,
    "pod": _cmd_sweep,
    "gap": _cmd_gap,
    "surrogate": _cmd_surrogate,
    "verify": _cmd_verify,
    "demo": _cmd_demo,
}


def _write(out: Path, artifacts: Artifacts) -> List[Path]:
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, payload in artifacts:
        path = out / name
        if name.endswith(".csv"):
            write_csv(path, payload)
        else:
            write_report(path, payload)
        written.append(path)
    return written


def run(config: RunConfig) -> int:
    """Run one command and write its artifacts.

    Args:
        config: The validated configuration.

    Raises:
        VerificationError: Raised after writing the verification report when
            some suite failed.

    Returns:
        The exit status, 0 on success.
    """
    artifacts = COMMAND_HANDLERS[config.command](config)
    for path in _write(config.out, artifacts):
        config.printer(f"Wrote {path}")

    if config.command == "verify":
        report = dict(artifacts)["verify.json"]
        failed = [suite["name"] for suite in report["suites"] if not suite["passed"]]
        if failed:
            raise VerificationError(failed)
    return 0


def _diagnose(error_string: str, message: Any) -> None:
    print(f"error: {error_string}: {message}", file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the paramlowrank command.

    Args:
        argv: The arguments, defaults to sys.argv[1:].

    Returns:
        The exit status: 0 on success, 1 on invalid input or a failed
        computation, 2 when verification fails.
    """
    try:
        return run(parse_args(argv))
    except VerificationError as exc:
        _diagnose(exc.error_string, exc)
        return 2
    except ParamLowRankError as exc:
        _diagnose(exc.error_string, exc)
        return 1
    except OSError as exc:
        _diagnose("Input.IO", exc)
        return 1
