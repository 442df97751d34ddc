import logging
import os
from rich.console import Console
from rich.logging import RichHandler

ROOT_LOGGER = "dispersia"

# stdout carries CSV when no --out is given
_console = Console(stderr=True)


def setup_logging(level: str = None) -> None:
    """
    Configure the dispersia logger tree once.
    Level falls back to DISPERSIA_LOG_LEVEL, then INFO.
    """
    level = (level or os.getenv("DISPERSIA_LOG_LEVEL", "INFO")).upper()
    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(level)
    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        handler = RichHandler(console=_console, show_path=False, markup=False)
        handler.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(handler)
    logger.propagate = False


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")
