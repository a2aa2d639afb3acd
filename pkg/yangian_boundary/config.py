"""
Runtime configuration.

Environment variables are read once (after load_dotenv) into a Settings model;
RunConfig carries the per-invocation options of the command line.
"""

import logging
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, validator

load_dotenv()

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("json", "csv", "text")


class Settings(BaseModel):
    """Process-wide defaults, overridable through the environment or a .env file."""

    log_dir: str = "logs"
    log_level: str = "INFO"
    mem_budget_mb: float = 512.0
    threads: int = 1
    bae_tol: float = 1e-11
    quad_limit: int = 400
    api_host: str = "0.0.0.0"
    api_port: int = 8000

    @validator("mem_budget_mb", "bae_tol")
    def _positive(cls, value):
        if value <= 0:
            raise ValueError("must be positive")
        return value

    @validator("threads", "quad_limit")
    def _at_least_one(cls, value):
        if value < 1:
            raise ValueError("must be at least 1")
        return value


def load_settings() -> Settings:
    """Build Settings from YANGIAN_* environment variables."""
    raw = {
        "log_dir": os.getenv("YANGIAN_LOG_DIR", "logs"),
        "log_level": os.getenv("YANGIAN_LOG_LEVEL", "INFO"),
        "mem_budget_mb": os.getenv("YANGIAN_MEM_BUDGET_MB", "512"),
        "threads": os.getenv("YANGIAN_THREADS", "1"),
        "bae_tol": os.getenv("YANGIAN_BAE_TOL", "1e-11"),
        "quad_limit": os.getenv("YANGIAN_QUAD_LIMIT", "400"),
        "api_host": os.getenv("YANGIAN_API_HOST", "0.0.0.0"),
        "api_port": os.getenv("YANGIAN_API_PORT", "8000"),
    }
    try:
        return Settings(**raw)
    except ValueError as e:
        logger.error(f"Invalid YANGIAN_* environment configuration: {e}")
        raise


settings = load_settings()


class RunConfig(BaseModel):
    """Options shared by every CLI subcommand."""

    command: str
    algebra: Optional[str] = None
    boundary: Optional[str] = None
    tol: float = Field(default=1e-10)
    output: str = "json"
    threads: int = Field(default_factory=lambda: settings.threads)
    mem_budget_mb: float = Field(default_factory=lambda: settings.mem_budget_mb)

    @validator("tol", "mem_budget_mb")
    def _positive(cls, value):
        if value <= 0:
            raise ValueError("must be positive")
        return value

    @validator("threads")
    def _threads(cls, value):
        if value < 1:
            raise ValueError("threads must be at least 1")
        return value

    @validator("output")
    def _output(cls, value):
        if value not in OUTPUT_FORMATS:
            raise ValueError(f"output must be one of {OUTPUT_FORMATS}")
        return value

    @property
    def mem_budget_bytes(self) -> int:
        return int(self.mem_budget_mb * 1024 * 1024)
