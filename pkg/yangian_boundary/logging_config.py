"""
Logging configuration for the yangian_boundary toolkit.
"""

import os
import logging
import sys
from datetime import datetime
from typing import Optional

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(log_dir: Optional[str] = None, level: Optional[str] = None) -> str:
    """
    Configure logging for a toolkit run.

    Writes a timestamped log file and mirrors every record to stderr, so that
    stdout stays reserved for JSON reports.

    Args:
        log_dir: Directory for log files. Defaults to YANGIAN_LOG_DIR or "logs".
        level: Level name. Defaults to YANGIAN_LOG_LEVEL or "INFO".

    Returns:
        Path of the log file.
    """
    logs_dir = log_dir or os.getenv("YANGIAN_LOG_DIR", "logs")
    if not os.path.exists(logs_dir):
        os.makedirs(logs_dir)

    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    log_file = os.path.join(logs_dir, f"yangian_{timestamp}.log")

    numeric_level = getattr(logging, (level or os.getenv("YANGIAN_LOG_LEVEL", "INFO")).upper(), logging.INFO)

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)

    # Clear any existing handlers
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)

    file_handler = logging.FileHandler(log_file)
    file_handler.setLevel(numeric_level)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(numeric_level)

    formatter = logging.Formatter(LOG_FORMAT)
    file_handler.setFormatter(formatter)
    console_handler.setFormatter(formatter)

    root_logger.addHandler(file_handler)
    root_logger.addHandler(console_handler)

    logging.info("Logging configured")

    return log_file


def configure_console_logging(level: Optional[str] = None) -> None:
    """Send records to stderr only; used when no log file is requested."""
    logging.basicConfig(
        level=getattr(logging, (level or os.getenv("YANGIAN_LOG_LEVEL", "WARNING")).upper(), logging.WARNING),
        format=LOG_FORMAT,
        stream=sys.stderr,
    )
