"""Exact computations with resolving differential graded algebras over the rationals."""

__version__ = "0.1.0"

from .dga import (Augmentation, DGAMorphism, FreeDGA, ResolvingAlgebra, adjoin_cells,
                  koszul, lambda_algebra, localize, standard_etale, tensor, truncation)
from .errors import DGError, DSLError
from .graded import Exact, TruncatedAtOrder, WeightExact, cohomology_dims
from .poly import GradedRing, Poly, graded_partial

__all__ = [
    "Augmentation", "DGAMorphism", "DGError", "DSLError", "Exact", "FreeDGA", "GradedRing",
    "Poly", "ResolvingAlgebra", "TruncatedAtOrder", "WeightExact", "adjoin_cells",
    "cohomology_dims", "graded_partial", "koszul", "lambda_algebra", "localize",
    "standard_etale", "tensor", "truncation",
]
