"""
Exception hierarchy shared by the generators, the trainer, the experiment
harness and the command line.
"""
from typing import Optional


class ImbalanceLabError(Exception):
    """Base class for all project errors"""


class DatasetFormatError(ImbalanceLabError, ValueError):
    """Malformed dataset file"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(ImbalanceLabError, ValueError):
    """Invalid experiment configuration"""

    def __init__(self, message: str, path: str = "$"):
        self.path = path
        super().__init__(f"{path}: {message}")


class ResultsFileError(ImbalanceLabError):
    """Missing or corrupt results file"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TrainingDivergedError(ImbalanceLabError):
    """Loss or parameters became non-finite during training"""
