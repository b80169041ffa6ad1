"""
Command line interface: generate datasets, train one network, run
experiment grids and report results.

Exit codes: 0 success, 1 usage error (bad flags, parameter ranges, invalid
experiment config), 2 runtime or I/O error.
"""
import json
import logging
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from config.settings import (
    CACHE_ENABLED,
    DEFAULT_BATCH_SIZE,
    DEFAULT_EPOCHS,
    DEFAULT_JOBS,
    DEFAULT_LEARNING_RATE,
    DEFAULT_OUTPUT_DIR,
    LOG_FORMAT,
    LOG_LEVEL,
    MAX_LEVEL,
    OVERLAP_MAX_LEVEL,
    OVERLAP_TOTAL,
)
from src.domains.generators import (
    all_backbone_specs,
    all_gaussian_backbone_specs,
    all_overlap_specs,
    gen_backbone_testset,
    gen_gaussian_backbone_testset,
    gen_overlap_testset,
    generate_domain,
)
from src.domains.models import BackboneSpec, Dataset, GaussianBackboneSpec, OverlapSpec
from src.domains.storage import load_dataset, save_dataset
from src.errors import ConfigError, ImbalanceLabError
from src.experiments.cache import CellCache
from src.experiments.config import load_experiment_config
from src.experiments.presets import PRESETS, get_preset
from src.experiments.results import pivot_results, plot_rows, read_results, write_results, write_table
from src.experiments.runner import run_grid
from src.experiments.seeds import repeat_seeds
from src.metrics.binary import evaluate
from src.metrics.models import METRIC_KEYS
from src.nn.mlp import predict
from src.nn.models import MlpConfig
from src.nn.training import save_model, train
from .models import RunConfig
from .report import print_report

logger = logging.getLogger(__name__)

PROG_NAME = "imbalance-lab"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
OPTION_NAMES = {"out_dir": "--out", "seed": "--seed", "jobs": "--jobs"}


def _typer_click_class(name: str) -> Any:
    """Exception class from whichever click build typer raises with"""
    return next(cls for cls in typer.BadParameter.__mro__ if cls.__name__ == name)


# newer typer releases ship their own copy of click
UsageError = _typer_click_class("UsageError")
ClickException = _typer_click_class("ClickException")

console = Console()
err_console = Console(stderr=True)

app = typer.Typer(
    name=PROG_NAME,
    help="Depth versus class imbalance on synthetic domains.",
    add_completion=False,
    no_args_is_help=True,
)
generate_app = typer.Typer(help="Write synthetic training or balanced test sets.", no_args_is_help=True)
app.add_typer(generate_app, name="generate")


def _seed_option():
    return typer.Option(..., "--seed", min=0, help="Master seed (required)")


def _out_option():
    return typer.Option(DEFAULT_OUTPUT_DIR, "--out", help="Output directory")


def _run_config(command: str, out: Path, seed: int, **kwargs) -> RunConfig:
    try:
        return RunConfig(command=command, out_dir=out, seed=seed, **kwargs)
    except ValidationError as e:
        first = e.errors()[0]
        field = str(first["loc"][0]) if first["loc"] else ""
        raise typer.BadParameter(first["msg"], param_hint=f"'{OPTION_NAMES.get(field, field)}'")


def _require(value: Optional[int], flag: str) -> int:
    if value is None:
        raise typer.BadParameter("is required unless --all is given", param_hint=f"'{flag}'")
    return value


def _write_datasets(cfg: RunConfig, items: Sequence[Tuple[str, Dataset]]):
    for stem, ds in items:
        save_dataset(ds, cfg.out_dir / f"{stem}.csv")
    logger.info(f"Generated {len(items)} {cfg.family} dataset(s) in {cfg.out_dir}")
    console.print(f"Wrote {len(items)} dataset(s) to [bold]{cfg.out_dir}[/bold]")


@app.callback()
def main(
    log_level: str = typer.Option(LOG_LEVEL, "--log-level", help="Logging level"),
):
    level = log_level.upper()
    if level not in LOG_LEVELS:
        raise typer.BadParameter(f"must be one of {', '.join(LOG_LEVELS)}", param_hint="'--log-level'")
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

@generate_app.command("backbone")
def generate_backbone(
    c: Optional[int] = typer.Option(None, "--c", min=1, max=MAX_LEVEL, help="Complexity level"),
    s: Optional[int] = typer.Option(None, "--s", min=1, max=MAX_LEVEL, help="Size level"),
    b: Optional[int] = typer.Option(None, "--b", min=1, max=MAX_LEVEL, help="Balance level"),
    all_specs: bool = typer.Option(False, "--all", help="Every (c, s, b) combination"),
    test: bool = typer.Option(False, "--test", help="Balanced test set for --c instead"),
    seed: int = _seed_option(),
    out: Path = _out_option(),
):
    """Uniform backbone datasets."""
    cfg = _run_config("generate", out, seed, family="backbone", params={"c": c, "s": s, "b": b})
    if test:
        levels = range(1, MAX_LEVEL + 1) if all_specs else [_require(c, "--c")]
        items = [(f"backbone_test_c{lvl}_seed{seed}", gen_backbone_testset(lvl, seed=seed)) for lvl in levels]
    else:
        if all_specs:
            specs = list(all_backbone_specs())
        else:
            specs = [BackboneSpec(c=_require(c, "--c"), s=_require(s, "--s"), b=_require(b, "--b"))]
        items = [(f"{spec.label()}_seed{seed}", generate_domain(spec, seed)) for spec in specs]
    _write_datasets(cfg, items)


@generate_app.command("overlap")
def generate_overlap(
    level: Optional[int] = typer.Option(None, "--level", min=1, max=OVERLAP_MAX_LEVEL, help="Overlap level k"),
    minority_frac: Optional[float] = typer.Option(None, "--minority-frac", help="Minority fraction"),
    total: int = typer.Option(OVERLAP_TOTAL, "--total", min=2, help="Total number of rows"),
    all_specs: bool = typer.Option(False, "--all", help="Every (level, fraction) combination"),
    test: bool = typer.Option(False, "--test", help="Balanced test set for --level instead"),
    seed: int = _seed_option(),
    out: Path = _out_option(),
):
    """5-D Gaussian overlap datasets."""
    cfg = _run_config(
        "generate", out, seed, family="overlap",
        params={"k": level, "minority_frac": minority_frac, "total": total},
    )
    if test:
        levels = range(1, OVERLAP_MAX_LEVEL + 1) if all_specs else [_require(level, "--level")]
        items = [(f"overlap_test_k{lvl}_seed{seed}", gen_overlap_testset(lvl, seed=seed)) for lvl in levels]
    else:
        if all_specs:
            specs = [spec.model_copy(update={"total": total}) for spec in all_overlap_specs()]
        else:
            if minority_frac is None:
                raise typer.BadParameter("is required unless --all is given", param_hint="'--minority-frac'")
            try:
                specs = [OverlapSpec(k=_require(level, "--level"), minority_frac=minority_frac, total=total)]
            except ValidationError as e:
                raise typer.BadParameter(e.errors()[0]["msg"], param_hint="'--minority-frac'")
        items = [(f"{spec.label()}_seed{seed}", generate_domain(spec, seed)) for spec in specs]
    _write_datasets(cfg, items)


@generate_app.command("gaussian-backbone")
def generate_gaussian_backbone(
    v: Optional[int] = typer.Option(None, "--v", min=1, max=MAX_LEVEL, help="Variance level"),
    b: Optional[int] = typer.Option(None, "--b", min=1, max=MAX_LEVEL, help="Balance level"),
    all_specs: bool = typer.Option(False, "--all", help="Every (v, b) combination"),
    test: bool = typer.Option(False, "--test", help="Balanced test set for --v instead"),
    seed: int = _seed_option(),
    out: Path = _out_option(),
):
    """Gaussian backbone datasets (c=2, s=5)."""
    cfg = _run_config("generate", out, seed, family="gaussian_backbone", params={"v": v, "b": b})
    if test:
        levels = range(1, MAX_LEVEL + 1) if all_specs else [_require(v, "--v")]
        items = [
            (f"gaussian_backbone_test_v{lvl}_seed{seed}", gen_gaussian_backbone_testset(lvl, seed=seed))
            for lvl in levels
        ]
    else:
        if all_specs:
            specs = list(all_gaussian_backbone_specs())
        else:
            specs = [GaussianBackboneSpec(v=_require(v, "--v"), b=_require(b, "--b"))]
        items = [(f"{spec.label()}_seed{seed}", generate_domain(spec, seed)) for spec in specs]
    _write_datasets(cfg, items)


# ---------------------------------------------------------------------------
# train
# ---------------------------------------------------------------------------

def _metrics_table(title: str, metrics: dict) -> Table:
    table = Table(title=title)
    table.add_column("metric", style="cyan")
    table.add_column("value", justify="right")
    for key, value in metrics.items():
        table.add_row(key, f"{value:.4f}")
    return table


@app.command("train")
def train_command(
    data: Path = typer.Argument(..., help="Training dataset CSV"),
    depth: int = typer.Option(1, "--depth", min=1, help="Hidden layers"),
    hidden_units: int = typer.Option(8, "--hidden-units", min=1, help="Units per hidden layer"),
    epochs: int = typer.Option(DEFAULT_EPOCHS, "--epochs", min=1),
    learning_rate: float = typer.Option(DEFAULT_LEARNING_RATE, "--lr", help="Adam learning rate"),
    batch_size: int = typer.Option(DEFAULT_BATCH_SIZE, "--batch-size", min=1),
    test_file: Optional[Path] = typer.Option(None, "--test", help="Test CSV to evaluate on"),
    seed: int = _seed_option(),
    out: Path = _out_option(),
):
    """Train one network and save it with its training report."""
    cfg = _run_config("train", out, seed, params={"data": str(data), "depth": depth, "hidden_units": hidden_units})
    train_ds = load_dataset(data)
    try:
        mlp_cfg = MlpConfig(
            depth=depth,
            hidden_units=hidden_units,
            input_dim=train_ds.n_features,
            learning_rate=learning_rate,
            epochs=epochs,
            batch_size=batch_size,
            seed=seed,
        )
    except ValidationError as e:
        raise typer.BadParameter(e.errors()[0]["msg"], param_hint=f"'--{e.errors()[0]['loc'][0]}'")

    model, report = train(mlp_cfg, train_ds)
    logger.info(f"Training took {report.wall_time_s:.2f}s")

    stem = f"{data.stem}_d{depth}_h{hidden_units}_seed{seed}"
    model_path = save_model(model, cfg.out_dir / f"{stem}.npz")
    summary = {"config": mlp_cfg.model_dump(), **report.to_dict()}

    if test_file is not None:
        test_ds = load_dataset(test_file)
        bundle = evaluate(test_ds.labels, predict(model, test_ds.features), class_counts=train_ds.class_counts)
        summary["test_metrics"] = bundle.as_dict()
        console.print(_metrics_table(f"Test metrics on {test_file.name}", bundle.as_dict()))

    report_path = cfg.out_dir / f"{stem}_report.json"
    report_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    console.print(f"Model saved to [bold]{model_path}[/bold]")


# ---------------------------------------------------------------------------
# experiment
# ---------------------------------------------------------------------------

@app.command("experiment")
def experiment_command(
    preset: Optional[str] = typer.Option(None, "--preset", help=f"One of: {', '.join(PRESETS)}"),
    config: Optional[Path] = typer.Option(None, "--config", help="JSON or YAML experiment config"),
    name: Optional[str] = typer.Option(None, "--name", help="Output file stem"),
    epochs: Optional[int] = typer.Option(None, "--epochs", min=1, help="Override training epochs"),
    repeats: int = typer.Option(1, "--repeats", min=1, help="Seeds per cell, derived from --seed"),
    jobs: int = typer.Option(DEFAULT_JOBS, "--jobs", min=1, help="Worker processes"),
    cache: bool = typer.Option(CACHE_ENABLED, "--cache/--no-cache", help="Reuse finished cells"),
    seed: int = _seed_option(),
    out: Path = _out_option(),
):
    """Run experiment grids and write results plus the pivot CSV."""
    if (preset is None) == (config is None):
        raise UsageError("Provide exactly one of --preset or --config")
    if preset is not None and preset not in PRESETS:
        raise typer.BadParameter(f"must be one of {', '.join(PRESETS)}", param_hint="'--preset'")
    cfg = _run_config("experiment", out, seed, jobs=jobs, params={"preset": preset, "config": str(config)})

    seeds = repeat_seeds(seed, repeats)
    if preset is not None:
        grids = get_preset(preset, seeds, epochs)
    else:
        grids = load_experiment_config(config, default_seeds=seeds)
        if epochs is not None:
            grids = [grid.model_copy(update={"epochs": epochs}) for grid in grids]

    cell_cache = CellCache(enabled=True) if cache else None
    results = []
    for grid in grids:
        results.extend(run_grid(grid, jobs=cfg.jobs, cache=cell_cache))

    stem = name or preset or config.stem
    results_path = write_results(cfg.out_dir / f"{stem}.jsonl", results)
    pivot_path = write_table(cfg.out_dir / f"{stem}_pivot.csv", pivot_results(results))

    failed = sum(1 for r in results if not r.ok)
    console.print(f"{len(results)} cell(s), {failed} failed")
    console.print(f"Results: [bold]{results_path}[/bold]")
    console.print(f"Pivot:   [bold]{pivot_path}[/bold]")


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

@app.command("report")
def report_command(
    results_file: Path = typer.Argument(..., help="Results .jsonl file"),
    metric: str = typer.Option("gmean_macro", "--metric", help="Metric to tabulate"),
    out: Optional[Path] = typer.Option(None, "--out", help="Directory for the plot CSV"),
):
    """Print grouped tables and write plot-ready data."""
    if metric not in METRIC_KEYS:
        raise typer.BadParameter(f"must be one of {', '.join(METRIC_KEYS)}", param_hint="'--metric'")
    results = read_results(results_file)
    if not results:
        console.print(f"No results in {results_file}")
        return

    print_report(results, metric, console)
    out_dir = out or results_file.parent
    plot_path = write_table(out_dir / f"{results_file.stem}_plot.csv", plot_rows(results, metric), index=False)
    console.print(f"Plot data: [bold]{plot_path}[/bold]")


def run(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return its exit code instead of exiting"""
    try:
        rv = app(args=argv, prog_name=PROG_NAME, standalone_mode=False)
    except typer.Exit as e:
        return e.exit_code
    except typer.Abort:
        err_console.print("Aborted")
        return 1
    except UsageError as e:
        e.show()
        return 1
    except ConfigError as e:
        logger.error(f"Invalid experiment config: {e}")
        err_console.print(f"[red]Invalid experiment config: {e}[/red]")
        return 1
    except ClickException as e:
        e.show()
        return 2
    except (ImbalanceLabError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        err_console.print(f"[red]Error: {e}[/red]")
        return 2
    except Exception as e:
        logger.exception(f"Command failed: {e}")
        err_console.print(f"[red]Error: {e}[/red]")
        return 2
    return rv if isinstance(rv, int) else 0
