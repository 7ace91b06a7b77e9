"""Configuration management for toricchow."""

import logging
from pathlib import Path
from typing import Any

import yaml
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from toricchow.errors import DocumentError

logger = logging.getLogger(__name__)

CONFIG_FILE_NAMES = ("toricchow.yaml", "toricchow.yml")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class ToricChowSettings(BaseSettings):
    """Defaults for the CLI, overridable from the environment or a settings file."""

    model_config = SettingsConfigDict(env_prefix="TORICHOW_", env_file=".env", extra="ignore")

    audit_seed: int = 0
    audit_factor: int = Field(default=10, ge=10)  # samples per cell in the completeness audit
    text_matrix_limit: int = Field(default=30, ge=1)
    log_level: str = "WARNING"

    @field_validator("log_level")
    @classmethod
    def check_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"unknown log level '{v}'")
        return level


def find_config_file(start_path: Path | None = None) -> Path | None:
    """Find toricchow.yaml in current or parent directories."""
    search_path = start_path or Path.cwd()

    for path in [search_path, *search_path.parents]:
        for name in CONFIG_FILE_NAMES:
            config_file = path / name
            if config_file.exists():
                return config_file

    return None


def load_settings_file(config_path: Path) -> dict[str, Any]:
    """Read the settings overrides stored in a YAML file."""
    with open(config_path) as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as exc:
            raise DocumentError(f"cannot parse {config_path.name}: {exc}") from exc

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise DocumentError("settings file must contain a mapping", str(config_path))
    return data


def load_settings(config_path: Path | None = None) -> ToricChowSettings:
    """Load settings from the environment, with file values taking precedence."""
    if config_path is None:
        config_path = find_config_file()

    overrides: dict[str, Any] = {}
    if config_path is not None and config_path.exists():
        logger.debug("reading settings from %s", config_path)
        overrides = load_settings_file(config_path)

    return ToricChowSettings(**overrides)
