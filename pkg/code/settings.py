"""
Runtime configuration, read from ``PROPERIZE_*`` environment variables or a ``.env`` file.
"""

from functools import lru_cache
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class ToolkitSettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="PROPERIZE_", env_file=".env", extra="ignore")

    log_level: str = Field("WARNING", description="Level for the structlog/stdlib pipeline")
    log_format: Literal["console", "json"] = "console"
    log_file: Optional[str] = None

    # Upper bound on the number of states one explore() window may hold
    explore_state_limit: int = Field(100_000, ge=1)
    default_skew_agent: int = Field(1, ge=1)


@lru_cache()
def get_settings() -> ToolkitSettings:
    return ToolkitSettings()
