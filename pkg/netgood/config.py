"""
Application Configuration
Manages environment variables and solver settings
"""
from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Solver settings from environment variables (prefix NETGOOD_)"""

    model_config = SettingsConfigDict(
        env_prefix="NETGOOD_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    # Application Info
    APP_NAME: str = "netgood"
    APP_VERSION: str = "1.0.0"

    # Numerical tolerances
    TOL: float = 1e-9
    DEDUP_TOL: float = 1e-7
    SINGULAR_RCOND: float = 1e-12
    # Imaginary parts below IMAG_TOL * (1 + ||m||_inf) count as real
    IMAG_TOL: float = 1e-8
    FOC_TOL: float = 1e-6

    # Exact P-test and support enumeration visit 2^n subsets
    ENUMERATION_CAP: int = 20

    # Best-response dynamics
    BR_MAX_ITER: int = 10000
    BR_DIVERGENCE_FACTOR: float = 1e6

    # Grid oracle
    GRID_STEPS: int = 201
    GRID_TOL: float = 1e-7

    # Reports
    FLOAT_DIGITS: int = 12

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    LOG_FILE: Optional[str] = None

    def validate_tolerances(self):
        """Reject tolerances that would make every comparison meaningless"""
        for name in ("TOL", "DEDUP_TOL", "SINGULAR_RCOND", "IMAG_TOL",
                     "FOC_TOL", "GRID_TOL"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(
                    f"{name} must lie in (0, 1), got {value}. "
                    f"Set NETGOOD_{name} to a small positive number."
                )
        if self.ENUMERATION_CAP < 1:
            raise ValueError("ENUMERATION_CAP must be at least 1")
        if self.BR_MAX_ITER < 1:
            raise ValueError("BR_MAX_ITER must be at least 1")
        if not 1 <= self.FLOAT_DIGITS <= 17:
            raise ValueError("FLOAT_DIGITS must lie in [1, 17]")


@lru_cache()
def get_settings() -> Settings:
    """
    Settings are read and validated once per process;
    call get_settings.cache_clear() after changing NETGOOD_* variables
    """
    settings = Settings()
    settings.validate_tolerances()
    return settings
