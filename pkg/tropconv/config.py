"""
Configuration

Runtime settings read from the environment (optionally through a .env file).
Explicit function arguments always take precedence over these values.
"""

import logging
import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

# Configure logging
logger = logging.getLogger(__name__)


class Settings(BaseModel):
    """
    Engine settings.

    Attributes:
        threads (int): Worker threads for independent covering members and rounds
        chunk_factor (float): Multiplier of the default min-max chunk size
        sparse_factor (float): Multiplier of the close-summands sparse-path threshold
        log_level (str): Root logging level used by the CLI
    """

    threads: int = Field(1, ge=1, description="Worker threads for independent sub-problems")
    chunk_factor: float = Field(1.0, gt=0, description="Multiplier of ceil(sqrt(2^(n+1)))")
    sparse_factor: float = Field(1.0, ge=0, description="Multiplier of 2^n * ceil(4/eps)")
    log_level: str = Field("INFO", description="Logging level")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.strip().upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"Unknown log level: {v}")
        return level


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Load settings from the environment.

    Returns:
        Settings: Validated settings, cached for the life of the process
    """
    load_dotenv()
    settings = Settings(
        threads=os.getenv("TROPCONV_THREADS", "1"),
        chunk_factor=os.getenv("TROPCONV_CHUNK_FACTOR", "1.0"),
        sparse_factor=os.getenv("TROPCONV_SPARSE_FACTOR", "1.0"),
        log_level=os.getenv("TROPCONV_LOG_LEVEL", "INFO"),
    )
    logger.debug(f"Loaded settings: {settings.model_dump()}")
    return settings
