import json

import numpy as np
import pytest
from dateutil import parser as date_parser

from paramlowrank import (
    argmin_path,
    builtin_family,
    cubic_objective,
    sweep_pod,
    sweep_svd,
)
from paramlowrank.reports import (
    argmin_table,
    canonical_json,
    content_hash,
    sweep_table,
    write_csv,
    write_report,
)


def test_canonical_json_ignores_key_order():
    assert canonical_json({"b": [1, 2], "a": {"y": 1, "x": 2}}) == canonical_json(
        {"a": {"x": 2, "y": 1}, "b": [1, 2]}
    )


def test_content_hash_is_stable():
    first = content_hash({"seed": 0, "values": [0.1, 0.2]})
    assert first == content_hash({"values": [0.1, 0.2], "seed": 0})
    assert first != content_hash({"seed": 1, "values": [0.1, 0.2]})
    assert len(first) == 64


def test_write_report(tmp_path):
    path = tmp_path / "report.json"
    content = {"n": 1, "gaps": [1.0, 0.5]}
    write_report(path, content)
    text = path.read_text(encoding="utf-8")
    assert text.endswith("}\n")
    report = json.loads(text)
    assert report["content"] == content
    assert report["content_sha256"] == content_hash(content)
    assert date_parser.isoparse(report["generated_at"]).utcoffset().total_seconds() == 0


def test_sweep_table_of_svd_sweep():
    rows = sweep_table(sweep_svd(builtin_family("diag2"), np.linspace(0.0, 1.0, 5), 1))
    assert rows[0] == ["xi", "sigma_1", "sigma_2", "gap_n", "degenerate"]
    assert rows[2] == [0.25, 0.75, 0.25, 0.5, "false"]
    assert rows[3][-1] == "true"
    assert len(rows) == 6


def test_sweep_table_of_pod_sweep():
    rows = sweep_table(sweep_pod(builtin_family("atoms2"), [0.0, 1.0], 1))
    assert rows[0] == ["xi", "lambda_1", "lambda_2", "gap_n", "degenerate"]


def test_argmin_table():
    path = argmin_path(cubic_objective, [-1.0, 0.0, 1.0], [1.0, 2.0])
    rows = argmin_table(path)
    assert rows[0] == ["xi", "c_star", "value"]
    assert rows[2] == [2.0, -1.0, -6.0]


def test_write_csv_uses_round_trip_floats(tmp_path):
    path = tmp_path / "table.csv"
    write_csv(path, [["xi", "value"], [0.1, 1 / 3], [1.0, "true"]])
    assert path.read_bytes() == b"xi,value\n0.1,0.3333333333333333\n1.0,true\n"


@pytest.mark.parametrize("value", [0.1, 1e-20, 123456789.123])
def test_write_csv_floats_parse_back_exactly(tmp_path, value):
    path = tmp_path / "table.csv"
    write_csv(path, [["x"], [value]])
    assert float(path.read_text().splitlines()[1]) == value
