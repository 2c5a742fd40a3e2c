"""
Logging setup for the engine and CLI

All output goes to stderr (and optionally a log file) so that command
payloads on stdout stay byte-identical between runs.
"""

import logging
import sys
from pathlib import Path
from typing import Optional, Union

PACKAGE_LOGGER = "core"
LOG_FORMAT = "[%(asctime)s] [%(levelname)s] %(message)s"
DATE_FORMAT = "%H:%M:%S"


def setup_logging(level: Union[int, str] = logging.WARNING,
                  log_file: Optional[str] = None) -> logging.Logger:
    """
    Configure the package loggers

    Args:
        level: logging level name or number
        log_file: optional path of a session log file

    Returns:
        The configured package root logger
    """
    root = logging.getLogger(PACKAGE_LOGGER)
    root.setLevel(level)

    # Re-running setup must not stack handlers
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(formatter)
    root.addHandler(console)

    if log_file:
        try:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_file, encoding="utf-8")
            file_handler.setFormatter(formatter)
            root.addHandler(file_handler)
            root.info("Log file created: %s", log_file)
        except OSError as e:
            root.warning("Could not create log file: %s", e)

    # cli.* loggers share the same handlers
    cli_logger = logging.getLogger("cli")
    cli_logger.setLevel(level)
    cli_logger.handlers = root.handlers
    cli_logger.propagate = False

    root.propagate = False
    return root


def log_section(logger: logging.Logger, title: str, level: int = logging.INFO):
    """Write a framed section header"""
    separator = "=" * 70
    logger.log(level, separator)
    logger.log(level, title)
    logger.log(level, separator)
