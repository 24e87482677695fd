#!/usr/bin/env python
"""
Logger module for the singing pronunciation analysis toolkit.
Provides named loggers plus helpers used by the web front end's log panel.
"""

import os
import logging
import datetime
from typing import List

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class CustomFormatter(logging.Formatter):
    """Formatter shared by the console and file handlers"""

    FORMATS = {
        logging.DEBUG: LOG_FORMAT,
        logging.INFO: LOG_FORMAT,
        logging.WARNING: LOG_FORMAT,
        logging.ERROR: LOG_FORMAT,
        logging.CRITICAL: LOG_FORMAT
    }

    def format(self, record):
        log_fmt = self.FORMATS.get(record.levelno, LOG_FORMAT)
        formatter = logging.Formatter(log_fmt)
        return formatter.format(record)


def get_logs_dir() -> str:
    """Directory holding the daily log files (PRON_LOG_DIR overrides the project default)."""
    configured = os.getenv("PRON_LOG_DIR")
    if configured:
        return configured
    project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    return os.path.join(project_root, "logs")


def _file_logging_enabled() -> bool:
    return os.getenv("PRON_LOG_TO_FILE", "true").strip().lower() not in ("0", "false", "no", "off")


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger with the specified name.

    Args:
        name: The name of the logger

    Returns:
        A configured logger
    """
    logger = logging.getLogger(name)

    # Only configure if it hasn't been configured before
    if not logger.handlers:
        level = logging.getLevelName(os.getenv("PRON_LOG_LEVEL", "INFO").upper())
        if not isinstance(level, int):
            level = logging.INFO
        logger.setLevel(level)
        logger.propagate = False

        console_handler = logging.StreamHandler()
        console_handler.setLevel(level)
        console_handler.setFormatter(CustomFormatter())
        logger.addHandler(console_handler)

        if _file_logging_enabled():
            try:
                logs_dir = get_logs_dir()
                os.makedirs(logs_dir, exist_ok=True)

                log_file_path = os.path.join(
                    logs_dir, f"pronunciation-{datetime.datetime.now().strftime('%Y-%m-%d')}.log"
                )
                file_handler = logging.FileHandler(log_file_path, encoding="utf-8")
                file_handler.setLevel(level)
                file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
                logger.addHandler(file_handler)
            except OSError as e:
                # If file logging fails, still log to console
                logger.warning(f"Could not set up file logging: {str(e)}")

    return logger


def get_log_file_paths(max_count: int = 10) -> List[str]:
    """Most recently modified `.log` files in the logs directory, newest first."""
    logs_dir = get_logs_dir()
    if not os.path.isdir(logs_dir):
        return []

    paths = [os.path.join(logs_dir, name) for name in os.listdir(logs_dir) if name.endswith(".log")]
    paths.sort(key=os.path.getmtime, reverse=True)
    return paths[:max_count]


def read_log_file(log_file_path: str, max_lines: int = 100) -> str:
    """Last `max_lines` lines of a log file, or a short message when it cannot be read."""
    if not os.path.exists(log_file_path):
        return f"Log file not found: {log_file_path}"
    try:
        with open(log_file_path, "r", encoding="utf-8") as file:
            return "".join(file.readlines()[-max_lines:])
    except OSError as e:
        return f"Error reading log file: {e}"
