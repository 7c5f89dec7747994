"""Exact combinatorics and graded algebra for quilted surfaces."""

from .errors import QuiltError
from .graded import GradedMap, GradedModule
from .quilt import QuiltedSurface
from .symplectic import LagrangianCorrespondence, LagrangianSubspace, SymplecticSpace

__all__ = [
    "GradedMap",
    "GradedModule",
    "LagrangianCorrespondence",
    "LagrangianSubspace",
    "QuiltError",
    "QuiltedSurface",
    "SymplecticSpace",
]
__version__ = "0.1.0"
