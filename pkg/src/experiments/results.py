"""
Results files and summary tables.

Results are one JSON record per line with sorted keys, so the same grid
always produces the same bytes. Wall-clock runtimes go to a separate
`<name>_timings.jsonl`.
"""
import json
import logging
from pathlib import Path
from typing import List, Sequence, Union

import pandas as pd
from pydantic import ValidationError

from src.errors import ResultsFileError
from src.metrics.models import METRIC_KEYS
from .models import ExperimentResult

logger = logging.getLogger(__name__)

PIVOT_FLOAT_FORMAT = "%.6f"
INDEX_COLUMNS = ["family", "regimen", "depth", "size", "level"]


def timings_path(path: Union[str, Path]) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}_timings.jsonl")


def write_results(path: Union[str, Path], results: Sequence[ExperimentResult]) -> Path:
    """Write results as JSON lines, plus the timings sidecar"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for result in results:
            f.write(json.dumps(result.model_dump(mode="json"), sort_keys=True) + "\n")

    with open(timings_path(path), "w", encoding="utf-8", newline="\n") as f:
        for result in results:
            record = {
                "domain": result.domain.label(),
                "depth": result.depth,
                "seed": result.seed,
                "runtime_s": round(result.runtime_s, 3),
            }
            f.write(json.dumps(record) + "\n")

    logger.info(f"Wrote {len(results)} results to {path}")
    return path


def read_results(path: Union[str, Path]) -> List[ExperimentResult]:
    """Read a results file; blank lines are skipped.

    Raises:
        ResultsFileError: If the file is missing or a line is not a valid record
    """
    path = Path(path)
    if not path.exists():
        raise ResultsFileError(f"results file not found: {path}")

    results: List[ExperimentResult] = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise ResultsFileError(f"invalid JSON: {e.msg}", line=lineno)
            try:
                results.append(ExperimentResult.model_validate(record))
            except ValidationError as e:
                raise ResultsFileError(f"invalid result record: {e.errors()[0]['msg']}", line=lineno)
    return results


def _size(result: ExperimentResult) -> int:
    # data budget: backbone size level s, overlap total, Gaussian backbone is fixed at s=5
    domain = result.domain
    if domain.family == "backbone":
        return domain.s
    if domain.family == "overlap":
        return domain.total
    return 5


def plot_rows(results: Sequence[ExperimentResult], metric: str = "gmean_macro") -> pd.DataFrame:
    """Long-form table: one row per (family, regimen, depth, size, level, balance).

    Values are averaged over seeds; std is the sample std over seeds (NaN
    for a single seed). Failed cells are left out.
    """
    if metric not in METRIC_KEYS:
        raise ValueError(f"Unknown metric '{metric}'. Available: {', '.join(METRIC_KEYS)}")

    records = [
        {
            "family": r.domain.family,
            "regimen": r.regimen.label(),
            "depth": r.depth,
            "size": _size(r),
            "level": r.domain.level,
            "balance": r.domain.balance,
            "hidden_units": r.hidden_units,
            "value": r.mean[metric],
        }
        for r in results
        if r.ok and metric in r.mean
    ]
    columns = INDEX_COLUMNS + ["balance", "mean", "std", "n_seeds"]
    if not records:
        return pd.DataFrame(columns=columns)

    frame = pd.DataFrame.from_records(records)
    grouped = frame.groupby(INDEX_COLUMNS + ["balance"], sort=True)["value"]
    table = grouped.agg(mean="mean", std=lambda v: v.std(ddof=1), n_seeds="count").reset_index()
    return table[columns]


def pivot_results(results: Sequence[ExperimentResult], metric: str = "gmean_macro") -> pd.DataFrame:
    """Wide table: rows (family, regimen, depth, size, level), one column per balance level"""
    rows = plot_rows(results, metric)
    if rows.empty:
        return pd.DataFrame()
    table = rows.pivot_table(index=INDEX_COLUMNS, columns="balance", values="mean", aggfunc="first")
    table.columns = [f"{b:g}" for b in table.columns]
    return table


def write_table(path: Union[str, Path], table: pd.DataFrame, index: bool = True) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=index, float_format=PIVOT_FLOAT_FORMAT, lineterminator="\n")
    return path
