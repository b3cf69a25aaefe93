# subspace_lab/config.py

import logging
from pathlib import Path

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# The .env file sits next to this module, not in the caller's working directory.
this_directory = Path(__file__).parent
dotenv_path = this_directory / ".env"
load_dotenv(dotenv_path=dotenv_path)


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="SUBSPACE_LAB_", extra="ignore")

    # Certified arithmetic
    PRECISION_CAP: int = Field(
        default=4096,
        ge=64,
        description="Bit cap for adaptive refinement before a comparison is declared undecided.",
    )
    DEFAULT_PRECISION: int = Field(
        default=64,
        ge=16,
        description="Starting precision in bits; every refinement round doubles it.",
    )

    # Filtration
    CLOSURE_CAP: int = Field(
        default=10_000,
        ge=1,
        description="Maximum number of subspaces a Vojta closure may reach.",
    )

    # Runtime
    THREADS: int = Field(default=1, ge=1, description="Worker processes for scans.")
    LOG_LEVEL: str = Field(default="INFO")
    REPORT_FORMAT: str = Field(default="json", pattern="^(json|csv)$")


settings = Settings()

logging.basicConfig(level=settings.LOG_LEVEL)


def precision_ladder(cap: int | None = None, start: int | None = None):
    """Yield DEFAULT_PRECISION, 2x, 4x, ... up to and including the cap."""
    cap = settings.PRECISION_CAP if cap is None else cap
    bits = settings.DEFAULT_PRECISION if start is None else start
    while bits < cap:
        yield bits
        bits *= 2
    yield cap
