"""
Console tables for results files.
"""
from typing import Sequence

import pandas as pd
from rich.console import Console
from rich.table import Table

from src.experiments.models import ExperimentResult
from src.experiments.results import plot_rows

LEVEL_NAMES = {"backbone": "c", "overlap": "k", "gaussian_backbone": "v"}


def _block_title(family: str, regimen: str, depth: int, size: int) -> str:
    if family == "backbone":
        return f"{family} s={size} | {regimen} | depth {depth}"
    return f"{family} | {regimen} | depth {depth}"


def build_tables(results: Sequence[ExperimentResult], metric: str = "gmean_macro") -> list:
    """One table per (family, regimen, size, depth): rows are levels, columns balance levels"""
    rows = plot_rows(results, metric)
    tables = []
    if rows.empty:
        return tables

    for (family, regimen, depth, size), block in rows.groupby(
        ["family", "regimen", "depth", "size"], sort=True
    ):
        wide = block.pivot_table(index="level", columns="balance", values="mean", aggfunc="first")
        level_name = LEVEL_NAMES.get(family, "level")
        table = Table(title=_block_title(family, regimen, depth, size), caption=metric)
        table.add_column(level_name, justify="right", style="cyan")
        for balance in wide.columns:
            header = f"b={balance:g}" if family != "overlap" else f"{balance:g}"
            table.add_column(header, justify="right")
        for level, values in wide.iterrows():
            cells = ["-" if pd.isna(v) else f"{v:.3f}" for v in values]
            table.add_row(f"{level_name}{level}", *cells)
        tables.append(table)
    return tables


def print_report(results: Sequence[ExperimentResult], metric: str, console: Console) -> int:
    """Print the grouped tables; returns the number of blocks"""
    tables = build_tables(results, metric)
    for table in tables:
        console.print(table)
    failed = sum(1 for r in results if not r.ok)
    if failed:
        console.print(f"[yellow]{failed} failed cell(s) not shown[/yellow]")
    return len(tables)

