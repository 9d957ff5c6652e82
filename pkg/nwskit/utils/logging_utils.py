"""
Logging utilities for the NWS toolkit.

Reports are written to stdout, so log records always go to stderr (and to a
rotating file when NWS_LOG_FILE is set).
"""
import logging
import os
import sys
from datetime import datetime
from logging.handlers import RotatingFileHandler
from typing import Any, Dict, Optional

import pytz

from nwskit.config import LOG_FILE, LOG_LEVEL, LOG_TIMEZONE

CONSOLE_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s"


class ZonedFormatter(logging.Formatter):
    """Formatter stamping records in a fixed time zone."""

    def __init__(self, fmt: str, tz_name: str = LOG_TIMEZONE):
        super().__init__(fmt)
        self.tz = pytz.timezone(tz_name)

    def formatTime(self, record, datefmt=None):
        stamp = datetime.fromtimestamp(record.created, tz=pytz.UTC).astimezone(self.tz)
        return stamp.strftime(datefmt or "%Y-%m-%d %H:%M:%S %Z")


def _level(name: Optional[str]) -> int:
    # .env values may carry a trailing comment
    cleaned = (name or "").split("#")[0].strip().upper()
    level = logging.getLevelName(cleaned)
    if not isinstance(level, int):
        raise ValueError(f"Invalid log level: {name}")
    return level


def setup_logging(log_level: str = LOG_LEVEL, log_file: Optional[str] = LOG_FILE) -> logging.Logger:
    """
    Configure the root logger, replacing any handlers already installed.

    Args:
        log_level: DEBUG, INFO, WARNING, ERROR or CRITICAL.
        log_file: Optional path of a rotating log file (10 MB, 5 backups).

    Returns:
        The root logger.

    Raises:
        ValueError: If the level name is unknown.
    """
    level = _level(log_level)
    root = logging.getLogger()
    root.setLevel(level)
    for handler in list(root.handlers):
        root.removeHandler(handler)

    handlers = [(logging.StreamHandler(sys.stderr), CONSOLE_FORMAT)]
    if log_file:
        folder = os.path.dirname(log_file)
        if folder:
            os.makedirs(folder, exist_ok=True)
        handlers.append((RotatingFileHandler(log_file, maxBytes=10 * 1024 * 1024, backupCount=5), FILE_FORMAT))

    for handler, fmt in handlers:
        handler.setLevel(level)
        handler.setFormatter(ZonedFormatter(fmt))
        root.addHandler(handler)
    return root


def _summary(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, (list, tuple)):
        return f"[{len(value)} entries]"
    if isinstance(value, dict):
        return "{" + ", ".join(sorted(map(str, value))) + "}"
    return str(value)


def log_report(logger: logging.Logger, title: str, report: Dict[str, Any]):
    """
    Log a report dict at INFO, one line per top-level key.

    Never raises; a report that cannot be rendered is logged as an error.
    """
    try:
        logger.info(title)
        for key, value in report.items():
            logger.info(f"  {key}: {_summary(value)}")
    except Exception as e:
        logger.error(f"Error logging report {title}: {e}")
