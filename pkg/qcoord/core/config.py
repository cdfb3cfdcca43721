from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env", env_ignore_empty=True, extra="ignore"
    )

    # Project
    API_V1_STR: str = "/api/v1"
    PROJECT_NAME: str = "qcoord"

    # Run defaults (overridable per invocation)
    DEFAULT_N: int = 2
    DEFAULT_VARIANT: str = "m"
    DEFAULT_ELL: int = 3

    # Verification suites
    QCOORD_THREADS: Optional[int] = None
    PAIR_GRID_LIMIT: int = 6561  # 81 x 81
    PAIR_SAMPLE_SIZE: int = 500
    CONFLUENCE_MAX_LENGTH: int = 5
    RANDOM_SAMPLE_SIZE: int = 200
    RANDOM_SEED: int = 20240611

    # Expression limits
    MAX_EXPONENT: int = 64
    ENGINE_CACHE_SIZE: int = 32
    MEMO_LIMIT: int = 200_000

    # Rate limits for the heavy endpoints
    CHECK_RATE_LIMIT: str = "10/minute"
    EXPRESSION_RATE_LIMIT: str = "60/minute"


settings = Settings()
