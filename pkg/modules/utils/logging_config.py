"""
Logging configuration utilities for pachnercalc.

This module sets up the application logger with console output and an
optional log file. Library modules only ask for child loggers
(``pachnercalc.<area>``) and never add handlers themselves.
"""

import logging
import sys
from pathlib import Path
from typing import Optional, Union

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


def setup_logger(name: str = 'pachnercalc', level: int = logging.INFO,
                 log_file: Optional[Union[str, Path]] = None) -> logging.Logger:
    """
    Set up and configure a logger.

    Repeated calls reuse the existing handlers: the console handler is
    kept once and a file handler is only added for a new path.

    Args:
        name (str): Logger name
        level (int): Logging level
        log_file (str or Path, optional): Log file path

    Returns:
        logging.Logger: Configured logger
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    has_console = any(
        isinstance(h, logging.StreamHandler) and not isinstance(h, logging.FileHandler)
        for h in logger.handlers
    )
    if not has_console:
        console_handler = logging.StreamHandler(sys.stdout)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        target = str(log_path.resolve())
        known = {h.baseFilename for h in logger.handlers if isinstance(h, logging.FileHandler)}
        if target not in known:
            file_handler = logging.FileHandler(log_path)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

    for handler in logger.handlers:
        handler.setLevel(level)

    return logger
