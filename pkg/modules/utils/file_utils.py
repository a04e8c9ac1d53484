"""
File handling and general utility functions.

This module provides helpers for path handling, directory creation, output
file naming and text output used by the exporters and the CLI.
"""

import os
import sys
from pathlib import Path
from typing import Optional, Union

from modules.core.errors import ConfigError


def get_version() -> str:
    """
    Get the version of the application.

    Returns:
        str: Version string
    """
    try:
        from modules import __version__
        return __version__
    except ImportError:
        return "0.0.0"


def get_app_path() -> Path:
    """
    Get the path where the application is running from.

    Returns:
        Path: Path to the application directory
    """
    if getattr(sys, 'frozen', False):
        return Path(sys.executable).parent
    return Path(os.path.abspath(os.path.dirname(os.path.dirname(os.path.dirname(__file__)))))


def ensure_dir(directory: Union[str, Path]) -> Path:
    """
    Ensure that the specified directory exists.

    Args:
        directory (str or Path): Directory to ensure exists

    Returns:
        Path: Path object for the directory
    """
    dir_path = Path(directory)
    dir_path.mkdir(parents=True, exist_ok=True)
    return dir_path


def resolve_output_path(path: Union[str, Path], directory: Optional[Union[str, Path]] = None) -> Path:
    """
    Place a relative output path under the configured output directory.

    Absolute paths and paths with an explicit directory part are kept as given.
    """
    path = Path(path)
    if path.is_absolute() or path.parent != Path('.') or directory is None:
        return path
    return Path(directory) / path


def write_text(path: Union[str, Path], text: str) -> Path:
    """
    Write text to a file, creating parent directories.

    Raises:
        ConfigError: If the file cannot be written
    """
    path = Path(path)
    try:
        ensure_dir(path.parent)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
    except OSError as e:
        raise ConfigError(f"Cannot write {path}: {e}") from e
    return path

