"""
Logging utilities for gbec-lab

Everything goes to stderr: tables and CSV may be streamed on stdout.
"""

import sys
import logging
from typing import Optional, TextIO

import colorlog

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_COLORS = {
    'DEBUG': 'cyan',
    'INFO': 'green',
    'WARNING': 'yellow',
    'ERROR': 'red',
    'CRITICAL': 'red,bg_white',
}


def setup_logging(log_level: str = "INFO", stream: Optional[TextIO] = None) -> None:
    """
    Install the colored console handler on the root logger

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        stream: Output stream (default: sys.stderr)
    """
    level = getattr(logging, log_level.upper(), None)
    if not isinstance(level, int):
        raise ValueError(f"Unknown log level: {log_level}")

    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(stream or sys.stderr)
    console_handler.setFormatter(colorlog.ColoredFormatter(
        "%(log_color)s" + LOG_FORMAT,
        datefmt="%Y-%m-%d %H:%M:%S",
        log_colors=LOG_COLORS,
    ))
    root_logger.addHandler(console_handler)

    # numpy/scipy RuntimeWarnings (overflow in exp, etc.) land in the same stream
    logging.captureWarnings(True)


def get_logger(name: str, log_level: Optional[str] = None) -> logging.Logger:
    """
    Get a logger with the specified name

    Args:
        name: Logger name, normally __name__
        log_level: Optional log level to override the inherited one

    Returns:
        Logger instance
    """
    logger = logging.getLogger(name)

    if log_level:
        logger.setLevel(getattr(logging, log_level.upper()))

    return logger
