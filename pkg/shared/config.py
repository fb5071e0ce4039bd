"""Configuration management using Pydantic Settings."""

from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-level settings loaded from ``PERILOD_*`` environment variables.

    These are the last-resort defaults: CLI flags and config documents win.
    """

    model_config = SettingsConfigDict(env_prefix="PERILOD_", env_file=".env", env_file_encoding="utf-8", extra="ignore")

    seed: int | None = Field(default=None, ge=0, description="Master seed when neither flag nor config sets one")
    threads: int = Field(default=1, ge=1, description="Worker threads for trial simulation")
    log_level: str = Field(default="WARNING", description="Logging level")
    params_file: Path | None = Field(default=None, description="Gaze parameter file overriding the shipped one")


def get_settings() -> Settings:
    """Get application settings instance."""
    return Settings()
