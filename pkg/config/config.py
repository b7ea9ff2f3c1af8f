from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings

LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


class Settings(BaseSettings):
    # Application settings
    APP_VERSION: Optional[str] = None
    LOG_LEVEL: LogLevel = "WARNING"
    SHOW_PROGRESS: bool = False

    # Sweep parallelism, None means min(32, cpu count)
    SPDMD_THREADS: Optional[int] = Field(default=None, ge=1)

    # ADMM defaults
    ADMM_RHO: float = 1.0
    ADMM_EPS_PRIMAL: float = 1e-6
    ADMM_EPS_DUAL: float = 1e-6
    ADMM_K_MAX: int = 10000

    # Numerical tolerances
    RANK_TOLERANCE: float = 1e-10
    OSC_TOLERANCE: float = 1e-9
    UNIT_TOLERANCE: float = 5e-3
    PAIR_TOLERANCE: float = 1e-8

    # Grid geometry used when legacy CSV headers omit it
    DEFAULT_DY: float = 0.5
    DEFAULT_DZ: float = 20.0 / 96.0
    DEFAULT_H: float = 30.0

    class Config:
        env_file = ".env"
        extra = "ignore"


settings = Settings()
