"""Logging configuration for command-line runs.

Library modules only ever call logging.getLogger(__name__); handlers are
installed here, once, by the CLI. Diagnostics go to stderr through rich so
stdout stays reserved for machine-readable reports.
"""

import logging
import logging.handlers

from rich.console import Console
from rich.logging import RichHandler

from core.config import Settings

LOG_FORMAT = "%(asctime)s  %(levelname)-8s  %(name)s  %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_HANDLER_NAME = "mrt"


def configure_logging(settings: Settings) -> None:
    """Install the stderr handler (and optional rotating file handler).

    Safe to call repeatedly: handlers installed by an earlier call are
    replaced, never duplicated.

    Args:
        settings: Provides log_level and the optional log_file path.
    """
    root = logging.getLogger()
    for handler in list(root.handlers):
        if handler.get_name() == _HANDLER_NAME:
            root.removeHandler(handler)

    level = logging.getLevelName(settings.log_level.upper())
    if not isinstance(level, int):
        level = logging.WARNING
    root.setLevel(level)

    console_handler = RichHandler(
        console=Console(stderr=True),
        show_path=False,
        rich_tracebacks=False,
    )
    console_handler.set_name(_HANDLER_NAME)
    console_handler.setFormatter(logging.Formatter("%(name)s  %(message)s"))
    root.addHandler(console_handler)

    if settings.log_file:
        file_handler = logging.handlers.RotatingFileHandler(
            settings.log_file, maxBytes=1_000_000, backupCount=3, encoding="utf-8",
        )
        file_handler.set_name(_HANDLER_NAME)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT))
        root.addHandler(file_handler)
