"""Logging setup for scripts and the command line."""

import logging
import sys
from typing import Optional

from components.core.config import get_settings


def configure_logging(level: Optional[str] = None) -> None:
    """Configure the root logger once, writing to stderr."""
    settings = get_settings()
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format=settings.LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
    # matplotlib is chatty at DEBUG
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
