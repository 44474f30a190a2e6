"""
Runtime settings for HybridMC.
"""

from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings loaded from HYBRIDMC_* environment variables or a .env file."""

    model_config = SettingsConfigDict(
        env_prefix="HYBRIDMC_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Sampling
    threads: int = 1
    batch_elements: int = 2**20

    # Logging
    log_level: str = "INFO"

    # Run ledger
    database_path: str = "hybridmc.db"

    # HTTP server
    host: str = "127.0.0.1"
    port: int = 8000


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
