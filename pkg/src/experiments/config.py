"""
Experiment config files.

A config is JSON (or YAML for .yaml/.yml files) holding either one grid
object or {"grids": [...]}. Validation errors are reported with the JSON
path of the offending field, e.g. $.grids[0].depths[1].
"""
import json
import logging
from pathlib import Path
from typing import Any, List, Optional, Sequence, Union

import yaml
from pydantic import TypeAdapter, ValidationError

from src.errors import ConfigError
from .models import ExperimentGrid

logger = logging.getLogger(__name__)

_grid_adapter: TypeAdapter = TypeAdapter(ExperimentGrid)
_FAMILY_TAGS = {"backbone", "overlap", "gaussian_backbone"}


def _json_path(prefix: str, loc: Sequence[Union[str, int]]) -> str:
    path = prefix
    for i, part in enumerate(loc):
        # discriminated unions put the family tag first in the error location
        if i == 0 and part in _FAMILY_TAGS:
            continue
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    return path


def _parse(path: Path) -> Any:
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() in (".yaml", ".yml"):
        try:
            return yaml.safe_load(text)
        except yaml.YAMLError as e:
            raise ConfigError(f"invalid YAML: {e}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")


def parse_grids(data: Any, default_seeds: Optional[List[int]] = None) -> List[ExperimentGrid]:
    """Validate raw config data into grids.

    Args:
        data: Parsed JSON/YAML document
        default_seeds: Seeds for grids that do not list their own

    Raises:
        ConfigError: With the JSON path of the first invalid field
    """
    if isinstance(data, dict) and "grids" in data:
        extra = sorted(set(data) - {"grids"})
        if extra:
            raise ConfigError(f"unexpected field '{extra[0]}'", path=f"$.{extra[0]}")
        raw_grids = data["grids"]
        if not isinstance(raw_grids, list) or not raw_grids:
            raise ConfigError("must be a non-empty list of grids", path="$.grids")
        prefixes = [f"$.grids[{i}]" for i in range(len(raw_grids))]
    else:
        raw_grids = [data]
        prefixes = ["$"]

    grids: List[ExperimentGrid] = []
    for raw, prefix in zip(raw_grids, prefixes):
        if not isinstance(raw, dict):
            raise ConfigError("grid must be an object", path=prefix)
        if default_seeds is not None and "seeds" not in raw:
            raw = {**raw, "seeds": list(default_seeds)}
        try:
            grids.append(_grid_adapter.validate_python(raw))
        except ValidationError as e:
            first = e.errors()[0]
            raise ConfigError(first["msg"], path=_json_path(prefix, first["loc"]))
    return grids


def load_experiment_config(path: Union[str, Path], default_seeds: Optional[List[int]] = None) -> List[ExperimentGrid]:
    """Read and validate an experiment config file"""
    path = Path(path)
    grids = parse_grids(_parse(path), default_seeds)
    logger.info(f"Loaded {len(grids)} grid(s) from {path}")
    return grids
