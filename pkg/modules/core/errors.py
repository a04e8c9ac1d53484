"""
Exception hierarchy for pachnercalc.

Every error raised by the library derives from PachnerCalcError so the
command-line front end can report it uniformly.
"""

from typing import Any, Mapping, Optional


class PachnerCalcError(Exception):
    """Base class for all pachnercalc errors."""


class ZetaCollisionError(PachnerCalcError, ValueError):
    """Two vertices were given the same zeta coordinate."""


class MissingVertexError(PachnerCalcError, KeyError):
    """A vertex has no zeta coordinate assigned."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else 'missing vertex'


class RegistryMismatchError(PachnerCalcError):
    """Grassmann elements over different generator registries were combined."""


class UnknownGeneratorError(PachnerCalcError, KeyError):
    """A generator label is not part of the registry."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else 'unknown generator'


class GrassmannDomainError(PachnerCalcError):
    """An operation was applied outside its domain (odd exponent, repeated generator, ...)."""


class OperatorInversionError(PachnerCalcError):
    """No monomial f with d f = 1 could be found."""


class DimensionMismatchError(PachnerCalcError):
    """Matrix shapes do not fit the requested operation."""


class NotSkewSymmetricError(PachnerCalcError):
    """A Pfaffian was requested for a matrix that is not antisymmetric."""


class TriangulationError(PachnerCalcError):
    """Invalid cells or gluings.

    Attributes:
        cell: Offending cell id, when known
        slot: Offending facet slot, when known
    """

    def __init__(self, message: str, cell: Any = None, slot: Optional[int] = None):
        super().__init__(message)
        self.cell = cell
        self.slot = slot


class OrientationError(TriangulationError):
    """The complex cannot be oriented consistently (or is disconnected)."""


class MoveSiteError(TriangulationError):
    """The chosen cells do not match the left-hand side of the requested move."""


class LensParameterError(PachnerCalcError, ValueError):
    """Invalid (p, q, n) for a lens space construction."""


class ChainPatternError(TriangulationError):
    """The cells selected for excision do not form a chain of two tetrahedra."""


class InnerVertexError(PachnerCalcError):
    """The 4D short complex requires a triangulation without inner vertices."""


class InconsistentAlphaError(PachnerCalcError):
    """An alpha system violates the balance equations.

    Attributes:
        residuals: Nonzero residual per codimension-two face
    """

    def __init__(self, message: str, residuals: Optional[Mapping[Any, Any]] = None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class OrderlyConstructionError(PachnerCalcError):
    """The peeling construction of an orderly mapping stalled."""


class ElementaryMoveError(PachnerCalcError):
    """The requested new image is outside R_k of the orderly mapping."""


class ConfigError(PachnerCalcError):
    """The settings file could not be parsed."""


class SubsetError(PachnerCalcError, ValueError):
    """An ordered subset C of boundary faces has the wrong size or members."""
