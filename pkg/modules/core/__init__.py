"""
Core modules for Grassmann-algebra weights on triangulations.

This package provides exact scalars and Grassmann algebra, glued-cell
triangulations and Pachner moves, the 3D and 4D chain complexes, the
deformed move identities and the invariant G with its lens-space tables.
"""

from .errors import PachnerCalcError
from .grassmann import GeneratorRegistry, GrassmannElement
from .scalars import ZetaAssignment
from .triangulation import Triangulation

__all__ = ['PachnerCalcError', 'GeneratorRegistry', 'GrassmannElement', 'ZetaAssignment', 'Triangulation']
