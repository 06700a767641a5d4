"""Logging configuration for the knot invariant toolkit."""

import logging
from pathlib import Path

from .config import get_settings

# Ensure logs directory exists
LOG_DIR = Path(__file__).parent / "logs"
LOG_DIR.mkdir(exist_ok=True)

LOG_FILE = LOG_DIR / "knotyy.log"


def _level() -> int:
    return getattr(logging, get_settings().log_level.upper(), logging.INFO)


def setup_logger(name: str = __name__) -> logging.Logger:
    """Set up a logger that writes to stderr and to the log file.

    Stdout is reserved for the JSON documents printed by the CLI.

    Args:
        name: Name of the logger

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(_level())

    # Avoid adding handlers multiple times
    if logger.handlers:
        return logger

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # Console handler
    console_handler = logging.StreamHandler()
    console_handler.setLevel(_level())
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # File handler
    file_handler = logging.FileHandler(LOG_FILE, mode='a')
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)

    logger.propagate = False
    return logger


# Create default logger
logger = setup_logger("knotyy")
