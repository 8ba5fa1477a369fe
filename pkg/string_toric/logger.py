"""Logging utilities for the string_toric package."""

from __future__ import annotations

import logging
import sys
from typing import Optional, Union

ROOT_LOGGER_NAME = "string_toric"


def setup_logging(
    level: Union[int, str] = logging.INFO,
    format_string: Optional[str] = None,
    handler: Optional[logging.Handler] = None,
) -> logging.Logger:
    """Configure logging for the string_toric package.

    Log records go to stderr by default so that JSON written to stdout by the
    command line front end stays machine readable.

    Args:
        level: Logging level or level name (default: INFO)
        format_string: Custom format string for log messages
        handler: Custom log handler (default: StreamHandler to stderr)

    Returns:
        Configured package logger

    Example:
        >>> import logging
        >>> from string_toric.logger import setup_logging
        >>> logger = setup_logging(level=logging.DEBUG)
    """
    if format_string is None:
        format_string = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    logger = logging.getLogger(ROOT_LOGGER_NAME)
    logger.setLevel(level)

    # Remove existing handlers to avoid duplicates
    logger.handlers.clear()

    if handler is None:
        handler = logging.StreamHandler(sys.stderr)

    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(format_string))
    logger.addHandler(handler)

    return logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Get a logger below the package root logger.

    Args:
        name: Submodule name, usually ``__name__`` (e.g. 'string_toric.wiring' or 'wiring')

    Returns:
        Logger instance

    Example:
        >>> from string_toric.logger import get_logger
        >>> logger = get_logger(__name__)
        >>> logger.debug("enumerating rigorous paths")
    """
    if not name:
        return logging.getLogger(ROOT_LOGGER_NAME)
    if name == ROOT_LOGGER_NAME or name.startswith(f"{ROOT_LOGGER_NAME}."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")
