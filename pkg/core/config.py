"""Runtime configuration.

Settings are read once from the process environment (after loading a local
.env file) and validated by pydantic. Every cap the checkers enforce lives
here so experiments can raise or lower them without code changes:

    MRT_TABLE_SUPPORT_CAP=24 uv run python cli.py check-mrest f.qdimacs p.mrt
"""

import logging
import os

from dotenv import load_dotenv
from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

_ENV_PREFIX = "MRT_"

_settings: "Settings | None" = None


class Settings(BaseModel):
    """Validated toolkit configuration.

    Attributes:
        table_support_cap: Largest support a StrategyTable may have. Also
            bounds the consistency oracle of the MRes-T checker.
        entail_var_cap: Largest number of distinct variables an eFrege
            Infer line may mention across premises and conclusion.
        max_premises: Largest number of premises an Infer line may cite.
        oracle_var_cap: Largest QBF the game-tree oracle accepts.
        countermodel_var_cap: Largest existential count accepted by
            countermodel verification.
        search_existential_cap: Largest existential count accepted by
            bounded proof search.
        search_node_budget: Search nodes expanded before giving up.
        log_level: Root log level for the CLI.
        log_file: Optional path of a rotating log file.
    """

    table_support_cap: int = Field(default=20, ge=1)
    entail_var_cap: int = Field(default=20, ge=1)
    max_premises: int = Field(default=4, ge=1)
    oracle_var_cap: int = Field(default=16, ge=1)
    countermodel_var_cap: int = Field(default=20, ge=1)
    search_existential_cap: int = Field(default=12, ge=1)
    search_node_budget: int = Field(default=200_000, ge=1)
    log_level: str = "WARNING"
    log_file: str | None = None

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from MRT_* environment variables.

        Unset variables fall back to the field defaults. Values are passed
        through pydantic validation, so "abc" or "0" for a cap raises
        pydantic.ValidationError.
        """
        load_dotenv()
        values: dict[str, str] = {}
        for name in cls.model_fields:
            raw = os.environ.get(_ENV_PREFIX + name.upper())
            if raw is not None and raw != "":
                values[name] = raw
        settings = cls.model_validate(values)
        logger.debug("Loaded settings: %s", settings.model_dump())
        return settings


def get_settings() -> Settings:
    """Return the process-wide settings, loading them on first use."""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reset_settings() -> None:
    """Forget cached settings so the next get_settings() re-reads the environment."""
    global _settings
    _settings = None
