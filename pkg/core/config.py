"""
Runtime Settings

Values come from CF_* environment variables or a local .env file.
"""

from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class CentralFunctionSettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="CF_", env_file=".env", extra="ignore")

    cache_dir: Optional[Path] = Field(None, description="Directory persisting the memo cache between runs")
    log_level: str = Field("WARNING", description="Logging level for diagnostics on stderr")
    log_file: Optional[Path] = Field(None, description="Optional file receiving the same log records")

    default_seed: int = Field(20090517, ge=0, description="Seed used when none is given")
    default_trials: int = Field(20, ge=1, description="Random triples per cross-validation")
    sl2_steps: int = Field(4, ge=0, description="Shear factors per random SL(2) matrix")
    shear_bound: int = Field(4, ge=1, description="Bound on numerators and denominators of shear parameters")

    interpolation_extra_points: int = Field(6, ge=1, description="Residual-check points beyond the basis size")
    interpolation_max_attempts: int = Field(5, ge=1, description="Resampling attempts on a singular system")


@lru_cache(maxsize=1)
def get_settings() -> CentralFunctionSettings:
    return CentralFunctionSettings()
