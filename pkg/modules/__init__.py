"""
pachnercalc modules

This package contains the core algebra and topology (core) and the
logging, configuration and export helpers (utils).
"""

__version__ = '1.0.0'
