import logging
import os
import sys
from typing import Any, Optional, get_type_hints

from colorama import Fore, Style

from app.core.errors import DomainError

_LEVEL_COLORS = {
    logging.DEBUG: Fore.CYAN,
    logging.INFO: Fore.GREEN,
    logging.WARNING: Fore.YELLOW,
    logging.ERROR: Fore.RED,
    logging.CRITICAL: Fore.RED + Style.BRIGHT,
}


def require_setting(settings: Any, setting_name: str) -> Any:
    """
    Ensures that a setting is present and not None, unless it's Optional.
    Raises ValueError if the setting is missing and not Optional.
    """
    setting_value = getattr(settings, setting_name, None)
    type_hints = get_type_hints(type(settings))
    setting_type = type_hints.get(setting_name)

    if setting_type != Optional[setting_type] and setting_value is None:
        raise ValueError(f"Setting '{setting_name}' is required but not set.")
    return setting_value


class ColorFormatter(logging.Formatter):
    """Formatter that colors the level name for terminal output"""

    def format(self, record: logging.LogRecord) -> str:
        color = _LEVEL_COLORS.get(record.levelno, "")
        message = super().format(record)
        return f"{color}{record.levelname:<8}{Style.RESET_ALL} {message}"


def configure_logging(level: str = "WARNING") -> None:
    """Install a single stderr handler on the ``app`` logger"""
    numeric = logging.getLevelName(str(level).upper())
    if not isinstance(numeric, int):
        raise DomainError(f"Unknown log level: {level}")
    logger = logging.getLogger("app")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(ColorFormatter("%(name)s: %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(numeric)
    logger.propagate = False


def resolve_threads(requested: Optional[int]) -> int:
    """Number of sweep workers, an explicit ``requested`` cap wins over the default"""
    default = min(32, os.cpu_count() or 1)
    if requested is None:
        return default
    if requested < 1:
        raise DomainError(f"Thread cap must be positive, got {requested}")
    return requested
