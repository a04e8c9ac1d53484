"""
Utility modules for the pachnercalc application.

This package provides logging setup, settings loading, file helpers and
table/report export.
"""

from .file_utils import get_version
from .logging_config import setup_logger

__all__ = [
    'setup_logger',
    'get_version',
]
