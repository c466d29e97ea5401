import math
from enum import StrEnum
from typing import Any

from dotenv import find_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

from schema.models import Backend


class LogLevel(StrEnum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"

    def to_logging_level(self) -> int:
        """Convert to Python logging level constant."""
        import logging

        mapping = {
            LogLevel.DEBUG: logging.DEBUG,
            LogLevel.INFO: logging.INFO,
            LogLevel.WARNING: logging.WARNING,
            LogLevel.ERROR: logging.ERROR,
            LogLevel.CRITICAL: logging.CRITICAL,
        }
        return mapping[self]


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=find_dotenv(),
        env_file_encoding="utf-8",
        env_ignore_empty=True,
        extra="ignore",
        validate_default=False,
    )
    MODE: str | None = None

    LOG_LEVEL: LogLevel = LogLevel.WARNING

    DEFAULT_BACKEND: Backend = Backend.PERMANENT

    # Default theta grid, radians
    GRID_LO: float = 0.0
    GRID_HI: float = math.tau
    GRID_POINTS: int = 1001

    # Random thetas drawn by `verify`
    SEED: int = 0
    VERIFY_SAMPLES: int = 10

    # Grid points evaluated concurrently by a sweep; 1 keeps it serial
    SWEEP_WORKERS: int = 1

    ACCEPT_TOLERANCE: float = 1e-10
    BUILD_TOLERANCE: float = 1e-12
    REFINE_WIDTH: float = 1e-6
    DEDUP_WINDOW: float = 1e-5

    # Largest m + n handled with exact integer combinatorics
    MAX_SIZE: int = 40

    def model_post_init(self, __context: Any) -> None:
        if not self.GRID_HI > self.GRID_LO:
            raise ValueError(f"GRID_HI ({self.GRID_HI}) must be greater than GRID_LO ({self.GRID_LO})")
        if self.GRID_POINTS < 2:
            raise ValueError(f"GRID_POINTS must be at least 2, got {self.GRID_POINTS}")
        if self.SWEEP_WORKERS < 1:
            raise ValueError(f"SWEEP_WORKERS must be at least 1, got {self.SWEEP_WORKERS}")
        if self.VERIFY_SAMPLES < 1:
            raise ValueError(f"VERIFY_SAMPLES must be at least 1, got {self.VERIFY_SAMPLES}")
        tolerances = {
            "ACCEPT_TOLERANCE": self.ACCEPT_TOLERANCE,
            "BUILD_TOLERANCE": self.BUILD_TOLERANCE,
            "REFINE_WIDTH": self.REFINE_WIDTH,
            "DEDUP_WINDOW": self.DEDUP_WINDOW,
        }
        if bad := [name for name, value in tolerances.items() if not value > 0]:
            raise ValueError(f"Tolerances must be positive: {', '.join(bad)}")

    def is_dev(self) -> bool:
        return self.MODE == "dev"


settings = Settings()
