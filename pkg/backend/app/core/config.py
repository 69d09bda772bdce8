from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict


BACKEND_ENV_PATH = Path(__file__).resolve().parents[2] / ".env"


class Settings(BaseSettings):
    RLW_CATALOG_DIR: str = "catalogs"
    CATALOG_MAX_SIZE: int = 6
    NAIVE_CATALOG_MAX_SIZE: int = 4
    LIMIT_TUPLE_BOUND: int = 1_000_000
    NAIVE_THREAD_BOUND: int = 10_000
    FILTER_LATTICE_MAX_SIZE: int = 8
    SELF_TEST_MAX_SIZE: int = 4
    RANDOM_SYSTEM_COUNT: int = 100
    DEFAULT_SEED: int = 0
    DEFAULT_JOBS: int = 1
    LOG_LEVEL: str = "WARNING"

    model_config = SettingsConfigDict(env_file=BACKEND_ENV_PATH, extra="ignore")

settings = Settings()
