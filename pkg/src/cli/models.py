import os
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from config.settings import DEFAULT_JOBS, DEFAULT_OUTPUT_DIR


class RunConfig(BaseModel):
    """Validated options of one command invocation"""
    model_config = ConfigDict(frozen=True)

    command: Literal["generate", "train", "experiment", "report"]
    family: Optional[Literal["backbone", "overlap", "gaussian_backbone"]] = None
    params: Dict[str, Any] = Field(default_factory=dict)
    out_dir: Path = DEFAULT_OUTPUT_DIR
    seed: int = Field(..., ge=0)
    jobs: int = Field(default=DEFAULT_JOBS, ge=1)

    @field_validator("out_dir")
    @classmethod
    def validate_out_dir(cls, v: Path) -> Path:
        try:
            v.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ValueError(f"cannot create output directory {v}: {e}")
        if not v.is_dir() or not os.access(v, os.W_OK):
            raise ValueError(f"output directory {v} is not writable")
        return v
