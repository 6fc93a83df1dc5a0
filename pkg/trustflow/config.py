"""
Analyzer configuration loaded from environment variables.
Uses pydantic-settings for type-safe config with .env file support.
"""

from functools import lru_cache

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Catalog (None → shipped default tables)
    CATALOG_PATH: str | None = None

    # Output
    OUTPUT_DIR: str = "trustflow-out"
    EMIT: str = "exchange,flows,dot,report,summary"
    LEVEL: str = "component"  # point / component / application

    # Slicing pool
    JOBS: int = 0  # 0 → one worker per core

    # Critical-flow search
    MAX_WITNESS_LENGTH: int = 0  # 0 → unbounded
    MAX_APP_SETS: int = 16  # distinct app sets kept per node; 0 → unbounded

    # Reports stay byte-identical unless timings are requested
    RECORD_TIMINGS: bool = False

    LOG_LEVEL: str = "INFO"

    model_config = {
        "env_file": ".env",
        "env_prefix": "TRUSTFLOW_",
        "extra": "ignore",
    }


@lru_cache()
def get_settings() -> Settings:
    return Settings()
