from functools import lru_cache
from pathlib import Path
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Runtime settings
    DEFAULT_SEED: int = 20240229
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"
    OUTPUT_DIR: Path = Path("output")
    WORKERS: int = 1

    # Numeric tolerances
    SKEW_TOLERANCE: float = 1e-12
    ROTATION_TOLERANCE: float = 1e-9
    ROTATION_REJECT_TOLERANCE: float = 1e-6
    SUBSPACE_TOLERANCE: float = 1e-9
    NULLSPACE_RCOND: float = 1e-9
    INERTIA_TOLERANCE: float = 1e-12
    GRAZING_TOLERANCE: float = 1e-12
    CORNER_TOLERANCE: float = 1e-9
    MIN_FLIGHT_FACTOR: float = 1e-9
    CONTACT_TOLERANCE: float = 1e-9
    INVOLUTION_TOLERANCE: float = 1e-9
    ENERGY_TOLERANCE: float = 1e-9

    # Experiment settings
    RETURN_STEP_CAP: int = 10_000
    HISTOGRAM_BINS: int = 50
    KS_THRESHOLD: float = 0.01
    MAX_DROPPED_FRACTION: float = 0.001
    BOUNDED_GROWTH_FACTOR: float = 1.05
    FLOAT_FORMAT: str = "%.17g"

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = True
        validate_default = True


@lru_cache()
def get_settings() -> Settings:
    """
    Returns cached Settings instance to avoid reloading .env file on every access
    """
    return Settings()


settings = get_settings()
