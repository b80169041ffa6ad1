import hashlib
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Optional

from config.settings import CACHE_ENABLED, RESULTS_CACHE_DIR
from .models import ExperimentResult, GridCell

logger = logging.getLogger(__name__)


class CellCache:
    """On-disk cache of finished grid cells so interrupted grids can resume"""

    def __init__(self, cache_dir: Optional[Path] = None, enabled: bool = CACHE_ENABLED):
        self.cache_dir = Path(cache_dir) if cache_dir is not None else RESULTS_CACHE_DIR
        self.enabled = enabled

    def _get_cache_path(self, cell: GridCell) -> Path:
        """Cache file path for a cell"""
        cell_str = json.dumps(cell.model_dump(mode="json"), sort_keys=True)
        cache_key = hashlib.sha256(cell_str.encode()).hexdigest()
        return self.cache_dir / f"{cache_key}.json"

    def load(self, cell: GridCell) -> Optional[ExperimentResult]:
        """Cached result for a cell, if any"""
        if not self.enabled:
            return None
        cache_path = self._get_cache_path(cell)
        if not cache_path.exists():
            logger.debug(f"Cache miss for {cell.domain.label()} depth={cell.depth} seed={cell.seed}")
            return None

        try:
            with open(cache_path, "r", encoding="utf-8") as f:
                cached_data = json.load(f)
            logger.debug(f"Cache hit for {cache_path}")
            # runtime_s is excluded from the result dump and kept beside it
            result = dict(cached_data["result"], runtime_s=cached_data.get("runtime_s", 0.0))
            return ExperimentResult.model_validate(result)
        except Exception as e:
            logger.warning(f"Error reading cache {cache_path}: {e}")
            return None

    def save(self, cell: GridCell, result: ExperimentResult):
        """Store a successful cell result"""
        if not self.enabled or not result.ok:
            return

        cache_path = self._get_cache_path(cell)
        try:
            cache_data = {
                "cached_at": datetime.now().isoformat(),
                "result": result.model_dump(mode="json"),
                "runtime_s": result.runtime_s,
            }
            cache_path.parent.mkdir(parents=True, exist_ok=True)
            with open(cache_path, "w", encoding="utf-8") as f:
                json.dump(cache_data, f, ensure_ascii=False, indent=2)
            logger.debug(f"Result cached to {cache_path}")
        except Exception as e:
            logger.warning(f"Error saving cache {cache_path}: {e}")
