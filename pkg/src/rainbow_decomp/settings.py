"""Configuration settings for rainbow-decomp."""

from functools import lru_cache
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class BudgetSettings(BaseSettings):
    """Default budgets for searches, samplers and exhaustive checks."""

    exhaustive_subset_limit: int = Field(default=1_000_000, gt=0)
    sampled_draws: int = Field(default=10_000, gt=0)
    factorization_restarts: int = Field(default=1000, gt=0)
    solver_time_budget: float = Field(default=60.0, gt=0)
    switch_budget: int = Field(default=100_000, gt=0)
    regularize_recheck_draws: int = Field(default=64, ge=0)
    rmbg_search_attempts: int = Field(default=1000, gt=0)
    embedding_retries: int = Field(default=25, gt=0)

    model_config = SettingsConfigDict(
        frozen=True,
        extra="forbid"
    )


class RainbowSettings(BaseSettings):
    """Application settings, overridable through ``RAINBOW_*`` variables."""

    service_name: str = "rainbow-decomp"
    environment: str = "development"

    # RAINBOW_LOG
    log: Literal["error", "info", "debug"] = "info"
    json_logs: bool = False

    budgets: BudgetSettings = Field(default_factory=BudgetSettings)

    model_config = SettingsConfigDict(
        env_prefix="RAINBOW_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        case_sensitive=False,
        populate_by_name=True,
        extra="ignore",
    )

    @field_validator("log", mode="before")
    @classmethod
    def normalize_log(cls, v: str) -> str:
        """Accept any case for the log level."""
        return v.lower() if isinstance(v, str) else v


@lru_cache
def get_settings() -> RainbowSettings:
    """Return the process-wide settings instance."""
    return RainbowSettings()


__all__ = ["BudgetSettings", "RainbowSettings", "get_settings"]
