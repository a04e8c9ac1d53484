"""
Settings for pachnercalc.

Settings live in config/settings.json. Values from the file are merged over
the built-in defaults, so a partial file is fine; a missing file is created
with the defaults.
"""

import copy
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from modules.core.errors import ConfigError
from modules.core.invariant3d import LENS_ALPHA, PUBLISHED_LENS_TABLE
from modules.core.lens import DEFAULT_LABELLING
from modules.core.scalars import DEFAULT_DENOMINATOR_BOUND, DEFAULT_NUMERATOR_BOUND, to_scalar
from modules.utils.file_utils import get_app_path

DEFAULT_SETTINGS: Dict[str, Any] = {
    "verification": {
        "random_samples": 20,
        "alpha_systems": 10,
        "seed": 2011,
        "workers": 4,
        "zeta_numerator_bound": DEFAULT_NUMERATOR_BOUND,
        "zeta_denominator_bound": DEFAULT_DENOMINATOR_BOUND,
    },
    "lens": {
        "labelling": dict(DEFAULT_LABELLING),
        "alpha": LENS_ALPHA,
        "entries": [
            {"p": p, "q": q, "n": n, "zeta": list(zeta), "value": value}
            for p, q, n, zeta, value in PUBLISHED_LENS_TABLE
        ],
    },
    "output": {
        "directory": "results",
    },
}


def default_settings_path() -> Path:
    return get_app_path() / 'config' / 'settings.json'


def deep_merge(base: Mapping[str, Any], override: Mapping[str, Any]) -> Dict[str, Any]:
    """Recursively merge `override` into a copy of `base`; lists are replaced, not merged."""
    merged = copy.deepcopy(dict(base))
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _check_settings(settings: Mapping[str, Any], path: Path) -> None:
    verification = settings.get('verification')
    if not isinstance(verification, Mapping):
        raise ConfigError(f"'verification' must be an object in {path}")
    for key in ('random_samples', 'alpha_systems', 'seed', 'workers',
                'zeta_numerator_bound', 'zeta_denominator_bound'):
        value = verification.get(key)
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"verification.{key} must be an integer in {path}, got {value!r}")
    if verification['workers'] < 1:
        raise ConfigError(f"verification.workers must be at least 1 in {path}")
    lens = settings.get('lens')
    if not isinstance(lens, Mapping) or not isinstance(lens.get('labelling'), Mapping):
        raise ConfigError(f"lens.labelling must be an object in {path}")
    if not isinstance(lens.get('entries'), list):
        raise ConfigError(f"lens.entries must be a list in {path}")
    alpha = lens.get('alpha')
    try:
        if isinstance(alpha, bool):
            raise ValueError(f"{alpha!r} is not a scalar")
        to_scalar(alpha)
    except ValueError as e:
        raise ConfigError(f"lens.alpha must be an integer or a rational string in {path}: {e}") from e


def load_settings(path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    Load settings from a JSON file.

    Args:
        path (str or Path, optional): Settings file (default: config/settings.json)

    Returns:
        Dict[str, Any]: Settings with every default key present

    Raises:
        ConfigError: If the file is not valid JSON or has ill-typed values
    """
    logger = logging.getLogger('pachnercalc.config')
    config_path = Path(path) if path else default_settings_path()

    if not config_path.exists():
        logger.warning(f"Settings file not found at {config_path}, using defaults")
        try:
            os.makedirs(config_path.parent, exist_ok=True)
            with open(config_path, 'w') as f:
                json.dump(DEFAULT_SETTINGS, f, indent=4)
            logger.debug("Created default settings file")
        except OSError as e:
            logger.error(f"Error creating default settings file: {e}")
        return copy.deepcopy(DEFAULT_SETTINGS)

    try:
        with open(config_path, 'r') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Malformed settings file {config_path}: {e}") from e
    except OSError as e:
        raise ConfigError(f"Cannot read settings file {config_path}: {e}") from e

    if not isinstance(data, dict):
        raise ConfigError(f"Settings file {config_path} must hold a JSON object")

    settings = deep_merge(DEFAULT_SETTINGS, data)
    _check_settings(settings, config_path)
    logger.debug(f"Loaded settings from {config_path}")
    return settings


def lens_entries(settings: Mapping[str, Any]):
    """Table rows (p, q, n, zeta, value) from the lens section."""
    rows = []
    for entry in settings['lens']['entries']:
        try:
            rows.append((entry['p'], entry['q'], entry['n'], tuple(entry['zeta']), entry['value']))
        except (KeyError, TypeError) as e:
            raise ConfigError(f"Malformed lens entry {entry!r}: {e}") from e
    return rows
