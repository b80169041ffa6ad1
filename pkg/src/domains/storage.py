"""
Dataset persistence.
CSV with header `f0,...,f{d-1},label`, LF line endings, features written with
17 significant digits so a load reproduces every value exactly. A JSON
manifest sidecar records the generating spec, seed and class counts.
"""
import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd
from pandas.errors import EmptyDataError, ParserError

from src.errors import DatasetFormatError
from .models import Dataset, DatasetManifest

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
LABEL_COLUMN = "label"


def manifest_path(path: Union[str, Path]) -> Path:
    """Sidecar manifest path for a dataset CSV"""
    path = Path(path)
    return path.with_name(f"{path.stem}.manifest.json")


def save_dataset(ds: Dataset, path: Union[str, Path]) -> Path:
    """Write a dataset as CSV (plus its manifest when the dataset carries one).

    Args:
        ds: Dataset to write
        path: Target CSV path; parent directories are created

    Returns:
        The CSV path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    columns = [f"f{j}" for j in range(ds.n_features)]
    frame = pd.DataFrame(ds.features, columns=columns)
    frame[LABEL_COLUMN] = ds.labels
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", encoding="utf-8")

    if ds.manifest is not None:
        manifest_path(path).write_text(ds.manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")

    logger.debug(f"Dataset saved to {path} ({ds.n_rows} rows)")
    return path


def _first_bad_row(mask: np.ndarray) -> Optional[int]:
    bad = np.flatnonzero(mask)
    return int(bad[0]) if bad.size else None


def load_dataset(path: Union[str, Path]) -> Dataset:
    """Read a dataset CSV, validating every row.

    Raises:
        OSError: If the file cannot be read
        DatasetFormatError: On an empty file, bad header, wrong column count,
            non-numeric feature or a label other than 0/1 (with line number)
    """
    path = Path(path)
    try:
        # header=None keeps the header as row 0 so frame index + 1 is the file line
        frame = pd.read_csv(
            path,
            header=None,
            dtype=str,
            keep_default_na=False,
            engine="python",
            skip_blank_lines=False,
        )
    except EmptyDataError:
        raise DatasetFormatError(f"{path} is empty")
    except ParserError as e:
        raise DatasetFormatError(f"{path}: {e}")

    columns = frame.iloc[0].tolist()
    if len(columns) < 2 or columns[-1] != LABEL_COLUMN:
        raise DatasetFormatError(f"header must end with '{LABEL_COLUMN}', got {columns}", line=1)
    expected = [f"f{j}" for j in range(len(columns) - 1)]
    if columns[:-1] != expected:
        raise DatasetFormatError(f"feature columns must be {expected}, got {columns[:-1]}", line=1)

    body = frame.iloc[1:].reset_index(drop=True)
    body.columns = columns
    if body.empty:
        raise DatasetFormatError(f"{path} has no data rows")

    # Data rows start on line 2
    row = _first_bad_row((body.isna() | body.eq("")).any(axis=1).to_numpy())
    if row is not None:
        raise DatasetFormatError(f"expected {len(columns)} columns", line=row + 2)

    # float() is correctly rounded, so %.17g text reproduces every value exactly
    features = np.empty((len(body), len(expected)), dtype=np.float64)
    for i, values in enumerate(body[expected].itertuples(index=False, name=None)):
        try:
            features[i] = [float(v) for v in values]
        except ValueError:
            raise DatasetFormatError(f"non-numeric feature value in {list(values)}", line=i + 2)

    label_text = body[LABEL_COLUMN].str.strip()
    row = _first_bad_row(~label_text.isin(["0", "1"]).to_numpy())
    if row is not None:
        raise DatasetFormatError(f"label must be 0 or 1, got '{label_text.iloc[row]}'", line=row + 2)

    manifest = None
    sidecar = manifest_path(path)
    if sidecar.exists():
        try:
            manifest = DatasetManifest.model_validate_json(sidecar.read_text(encoding="utf-8"))
        except Exception as e:
            logger.warning(f"Ignoring unreadable manifest {sidecar}: {e}")

    return Dataset(
        features=features,
        labels=label_text.astype(np.int64).to_numpy(),
        manifest=manifest,
    )
