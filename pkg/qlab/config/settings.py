"""
Run settings using pydantic-settings.
"""
from functools import lru_cache
import logging
from typing import Literal

from pydantic import field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """Settings loaded from QLAB_* environment variables (and an optional .env file)."""

    # Element-count cap for stage builds and sweeps (QLAB_BUDGET)
    budget: int = 200_000

    # CLI defaults
    default_quantale: str = "lukasiewicz:3"
    default_alpha: int = 3
    default_depth: int = 2
    default_params: int = 1

    # Quantale validation
    distributivity_full_limit: int = 12
    distributivity_samples: int = 10_000
    random_seed: int = 20240101

    # Definability
    weak_subset_limit: int = 4
    max_saturation_depth: int = 4

    # Verification sweeps
    sweep_member_limit: int = 32
    hat_rank_bound: int = 3
    hat_into_frak_rank: int = 2

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    model_config = SettingsConfigDict(
        env_prefix="QLAB_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator(
        "budget",
        "default_alpha",
        "default_depth",
        "default_params",
        "distributivity_full_limit",
        "distributivity_samples",
        "weak_subset_limit",
        "max_saturation_depth",
        "sweep_member_limit",
        "hat_rank_bound",
        "hat_into_frak_rank",
    )
    @classmethod
    def non_negative(cls, v: int) -> int:
        """Reject negative bounds."""
        if v < 0:
            raise ValueError(f"must be >= 0, got {v}")
        return v

    @field_validator("log_level", mode="before")
    @classmethod
    def upper_log_level(cls, v):
        if isinstance(v, str):
            return v.upper()
        return v

    @model_validator(mode="after")
    def log_effective_configuration(self):
        logger.debug(
            f"qlab settings: budget={self.budget} alpha={self.default_alpha} "
            f"depth={self.default_depth} params={self.default_params} "
            f"saturation_cap={self.max_saturation_depth}"
        )
        return self


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
