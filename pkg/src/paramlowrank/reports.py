"""Report files: CSV plot data and hashed JSON reports."""
from __future__ import annotations

import csv
import hashlib
import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

from dateutil import tz

from paramlowrank.parametric import SVD, ArgminPath, SweepResult


def canonical_json(content: Any) -> str:
    """Serialize to JSON with sorted keys and no insignificant whitespace.

    >>> canonical_json({"b": 1, "a": [1.5, True]})
    '{"a":[1.5,true],"b":1}'
    """
    return json.dumps(
        content, sort_keys=True, separators=(",", ":"), ensure_ascii=False
    )


def content_hash(content: Any) -> str:
    """Return the SHA-256 hex digest of the canonical JSON of content."""
    return hashlib.sha256(canonical_json(content).encode("utf-8")).hexdigest()


def utc_timestamp() -> str:
    """Return the current UTC time in ISO 8601 format."""
    return datetime.now(tz.tzutc()).isoformat(timespec="seconds")


def wrap_report(content: Any) -> Dict[str, Any]:
    """Wrap report content with its hash and a generation timestamp.

    The hash covers `content` only, so two runs with the same inputs produce
    the same hash.

    Args:
        content: JSON-ready report content.

    Returns:
        {"content": ..., "content_sha256": ..., "generated_at": ...}
    """
    return {
        "content": content,
        "content_sha256": content_hash(content),
        "generated_at": utc_timestamp(),
    }


def write_report(path: Union[str, Path], content: Any) -> None:
    """Write wrapped report content as UTF-8 JSON.

    Args:
        path: The file to write.
        content: JSON-ready report content.
    """
    with Path(path).open("w", encoding="utf-8", newline="\n") as fp:
        json.dump(
            wrap_report(content), fp, sort_keys=True, indent=2, ensure_ascii=False
        )
        fp.write("\n")


def sweep_table(s: SweepResult) -> List[List[Any]]:
    """Tabulate a sweep as rows xi, sigma_1..sigma_k, gap_n, degenerate.

    POD sweeps name the spectrum columns lambda_1..lambda_k.

    Args:
        s: The sweep.

    Returns:
        A header row followed by one row per grid point.
    """
    prefix = "sigma" if s.kind == SVD else "lambda"
    header: List[Any] = ["xi"]
    header += [f"{prefix}_{i + 1}" for i in range(s.spectra.shape[1])]
    header += ["gap_n", "degenerate"]
    rows = [header]
    for xi, spectrum, gap, flag in zip(s.grid, s.spectra, s.gaps, s.degenerate):
        rows.append(
            [
                float(xi),
                *[float(value) for value in spectrum],
                float(gap),
                _flag(bool(flag)),
            ]
        )
    return rows


def argmin_table(path: ArgminPath) -> List[List[Any]]:
    """Tabulate an argmin path as rows xi, c_star, value."""
    rows: List[List[Any]] = [["xi", "c_star", "value"]]
    for xi, c_star, value in zip(path.grid, path.c_star, path.values):
        rows.append([float(xi), float(c_star), float(value)])
    return rows


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def write_csv(path: Union[str, Path], rows: Sequence[Sequence[Any]]) -> None:
    """Write rows as CSV with LF line endings, floats in round-trip form.

    Args:
        path: The file to write.
        rows: The rows, header first.
    """
    with Path(path).open("w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        for row in rows:
            writer.writerow([_cell(value) for value in row])
