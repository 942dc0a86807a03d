"""
Configuration settings for wkbwave
"""
from typing import Optional
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-level settings (environment variables and .env)"""

    model_config = SettingsConfigDict(
        env_prefix="WKBWAVE_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # App
    app_name: str = "wkbwave"
    app_version: str = "1.0.0"
    log_level: str = "INFO"

    # Threading (None leaves the BLAS/LAPACK default alone)
    max_threads: Optional[int] = None

    # WKB validity reporting
    validity_warning_margin: float = 100.0
    mode_weight_threshold: float = 1e-6  # relative to max |c(omega)|
    completeness_warning: float = 1e-2  # relative L2 residual of the initial field on the omega grid

    # Output
    csv_float_format: str = "%.17g"

    # Monotonicity gate run by every command
    monotone_samples: int = 2001


settings = Settings()
