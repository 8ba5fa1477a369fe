from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

import yaml
from pydantic import BaseModel, Field, field_validator

from .exceptions import ConfigurationError
from .logger import get_logger

logger = get_logger(__name__)


class Settings(BaseModel):
    """Pydantic model for string_toric resource caps and defaults.

    This model validates and provides type-safe access to the values of an
    optional YAML settings file. Every field has a default, so an empty mapping
    is a valid configuration.

    Attributes:
        max_rank: Largest n accepted by word enumeration (default: 5)
        vertex_max_dim: Largest ambient dimension for vertex enumeration (default: 10)
        vertex_max_rows: Largest row count for vertex enumeration (default: 30)
        box_max_points: Largest lattice-point bounding box (default: 10**7)
        facet_check_max_dim: Largest dimension for the full facet check (default: 6)
        fan_materialize_max_rank: Largest Bott rank whose cones are listed (default: 10)
        default_lambda: Weight entry used when no weight is given (default: 2)
        log_level: Log level name used by the command line front end (default: WARNING)
    """

    max_rank: int = Field(
        default=5, description="Largest n accepted by reduced-word enumeration", ge=1, le=7
    )
    vertex_max_dim: int = Field(
        default=10, description="Largest ambient dimension for vertex enumeration", ge=1, le=28
    )
    vertex_max_rows: int = Field(
        default=30, description="Largest number of rows for vertex enumeration", ge=1, le=200
    )
    box_max_points: int = Field(
        default=10_000_000,
        description="Largest bounding box scanned for lattice points",
        ge=1,
    )
    facet_check_max_dim: int = Field(
        default=6,
        description="Largest dimension for which resolve runs the full facet check",
        ge=1,
        le=28,
    )
    fan_materialize_max_rank: int = Field(
        default=10,
        description="Largest Bott rank whose maximal cones may be listed explicitly",
        ge=1,
        le=16,
    )
    default_lambda: int = Field(
        default=2, description="Weight entry used when no weight is given", ge=1, le=100
    )
    log_level: str = Field(default="WARNING", description="Log level for the CLI")

    @field_validator("log_level")
    @classmethod
    def known_level(cls, v: str) -> str:
        """Ensure the log level is a standard logging level name."""
        name = v.upper()
        if not isinstance(logging.getLevelName(name), int):
            raise ValueError(f"Unknown log level: {v}")
        return name


_active: Optional[Settings] = None


def default_settings() -> Settings:
    """Return the settings used when no overrides are passed."""
    global _active
    if _active is None:
        _active = Settings()
    return _active


def use_settings(settings: Optional[Settings]) -> None:
    """Make ``settings`` the active defaults; None restores the built-in values."""
    global _active
    _active = settings
    if settings is not None:
        logger.debug(f"Active settings: {settings.model_dump()}")


def load_config(path: Path) -> Settings:
    """Load and validate settings from a YAML file.

    Args:
        path: Path to the YAML configuration file

    Returns:
        Validated Settings instance

    Raises:
        ConfigurationError: If config file is not found or invalid

    Example:
        >>> from pathlib import Path
        >>> settings = load_config(Path("string_toric.yaml"))
        >>> settings.max_rank
        5
    """
    logger.debug(f"Loading configuration from {path}")

    try:
        with open(path, "r") as f:
            raw_config = yaml.safe_load(f)
    except FileNotFoundError:
        logger.error(f"Configuration file not found: {path}")
        raise ConfigurationError(f"Config file not found at: {path}")
    except yaml.YAMLError as e:
        logger.error(f"Invalid YAML in config file: {e}")
        raise ConfigurationError(f"Invalid YAML format in config file: {e}")

    if raw_config is None:
        logger.error("Configuration file is empty")
        raise ConfigurationError("Config file is empty")
    if not isinstance(raw_config, dict):
        raise ConfigurationError("Config file must contain a mapping of settings")

    try:
        settings = Settings(**raw_config)
    except ValueError as e:
        logger.error(f"Configuration validation failed: {e}")
        raise ConfigurationError(f"Invalid configuration: {e}")

    logger.info("Configuration validated successfully")
    return settings
