"""
Process-wide settings loaded from the environment (and an optional .env file).
"""
import os
from dataclasses import dataclass, field
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


@dataclass
class Settings:
    """
    Settings that apply to every command, independent of the run config.
    """

    # === OUTPUT ===
    output_root: Path = field(default_factory=lambda: Path(os.getenv("SLAM_BOOSTER_OUTPUT_ROOT", "runs")))

    # === LOGGING ===
    log_dir: Path = field(default_factory=lambda: Path(os.getenv("SLAM_BOOSTER_LOG_DIR", "logs")))
    log_level: str = field(default_factory=lambda: os.getenv("SLAM_BOOSTER_LOG_LEVEL", "INFO").upper())

    # === EXPERIMENTS ===
    sweep_workers: int = field(default_factory=lambda: int(os.getenv("SLAM_BOOSTER_SWEEP_WORKERS", "1")))
    show_progress: bool = field(default_factory=lambda: _env_flag("SLAM_BOOSTER_PROGRESS", "false"))

    def __post_init__(self):
        """Validate settings."""
        if self.log_level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"SLAM_BOOSTER_LOG_LEVEL must be a logging level name, got {self.log_level!r}")
        if self.sweep_workers < 1:
            raise ValueError("SLAM_BOOSTER_SWEEP_WORKERS must be at least 1")


# Global settings instance
settings = Settings()
