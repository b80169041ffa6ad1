"""Tests for results files and summary tables."""

import json
import math

import pandas as pd
import pytest

from src.domains.models import BackboneSpec, OverlapSpec
from src.errors import ResultsFileError
from src.experiments.models import ExperimentResult, Regimen
from src.experiments.results import (
    pivot_results,
    plot_rows,
    read_results,
    timings_path,
    write_results,
    write_table,
)
from src.metrics.models import METRIC_KEYS


def _result(b, seed, value, c=1, depth=1, status="ok"):
    mean = {key: value for key in METRIC_KEYS} if status == "ok" else {}
    return ExperimentResult(
        domain=BackboneSpec(c=c, s=1, b=b),
        regimen=Regimen(),
        depth=depth,
        hidden_units=4 if status == "ok" else None,
        seed=seed,
        status=status,
        error=None if status == "ok" else "RuntimeError: boom",
        mean=mean,
        runtime_s=1.25,
    )


RESULTS = [
    _result(1, 0, 0.6),
    _result(1, 1, 0.8),
    _result(5, 0, 1.0),
    _result(5, 1, 1.0),
    _result(1, 0, 0.2, c=2),
    _result(5, 0, 0.0, c=2, status="failed"),
]


def test_write_and_read_round_trip(tmp_path):
    path = write_results(tmp_path / "run.jsonl", RESULTS)
    loaded = read_results(path)
    assert [r.model_dump(mode="json") for r in loaded] == [r.model_dump(mode="json") for r in RESULTS]
    assert "runtime_s" not in path.read_text(encoding="utf-8")
    timings = [json.loads(line) for line in timings_path(path).read_text(encoding="utf-8").splitlines()]
    assert timings[0] == {"domain": "backbone_c1_s1_b1", "depth": 1, "seed": 0, "runtime_s": 1.25}


def test_results_file_is_byte_stable(tmp_path):
    a = write_results(tmp_path / "a.jsonl", RESULTS)
    b = write_results(tmp_path / "b.jsonl", RESULTS)
    assert a.read_bytes() == b.read_bytes()
    first = json.loads(a.read_text(encoding="utf-8").splitlines()[0])
    assert list(first) == sorted(first)


def test_corrupt_line_is_reported(tmp_path):
    path = write_results(tmp_path / "run.jsonl", RESULTS[:3])
    lines = path.read_text(encoding="utf-8").splitlines()
    lines[1] = lines[1][:-5]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(ResultsFileError) as excinfo:
        read_results(path)
    assert excinfo.value.line == 2


def test_invalid_record_is_reported(tmp_path):
    path = tmp_path / "run.jsonl"
    path.write_text("\n" + json.dumps({"depth": 1}) + "\n", encoding="utf-8")
    with pytest.raises(ResultsFileError) as excinfo:
        read_results(path)
    assert excinfo.value.line == 2


def test_missing_results_file(tmp_path):
    with pytest.raises(ResultsFileError):
        read_results(tmp_path / "nope.jsonl")


def test_plot_rows_average_over_seeds():
    rows = plot_rows(RESULTS)
    assert len(rows) == 3
    first = rows.iloc[0]
    assert (first["family"], first["regimen"], first["depth"], first["size"], first["level"]) == (
        "backbone", "balanced_test", 1, 1, 1
    )
    assert first["balance"] == 1.0
    assert first["mean"] == pytest.approx(0.7)
    assert first["std"] == pytest.approx(math.sqrt(0.02))
    assert first["n_seeds"] == 2
    single = rows[(rows["level"] == 2)].iloc[0]
    assert math.isnan(single["std"])


def test_plot_rows_rejects_unknown_metric():
    with pytest.raises(ValueError):
        plot_rows(RESULTS, "accuracy")
    assert plot_rows([], "f1_macro").empty


def test_pivot_layout(tmp_path):
    table = pivot_results(RESULTS)
    assert list(table.index.names) == ["family", "regimen", "depth", "size", "level"]
    assert list(table.columns) == ["1", "5"]
    assert table.shape == (2, 2)
    assert table.loc[("backbone", "balanced_test", 1, 1, 1), "5"] == pytest.approx(1.0)
    # the failed c=2, b=5 cell leaves a gap
    assert pd.isna(table.loc[("backbone", "balanced_test", 1, 1, 2), "5"])

    path = write_table(tmp_path / "pivot.csv", table)
    text = path.read_text(encoding="utf-8")
    assert text.splitlines()[0] == "family,regimen,depth,size,level,1,5"
    assert "0.700000" in text
    assert "\r" not in text


def test_overlap_size_is_total():
    result = ExperimentResult(
        domain=OverlapSpec(k=3, minority_frac=0.05, total=2000),
        regimen=Regimen(kind="stratified_cv"),
        depth=5,
        hidden_units=16,
        seed=0,
        mean={key: 0.5 for key in METRIC_KEYS},
    )
    rows = plot_rows([result])
    assert rows.iloc[0]["size"] == 2000
    assert rows.iloc[0]["regimen"] == "cv10"
    assert pivot_results([result]).columns.tolist() == ["0.05"]


def test_empty_pivot():
    assert pivot_results([]).empty
