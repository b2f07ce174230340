"""Exact verification of (m,n)-derivable maps at a point on generalized
matrix algebras and finite CSL algebras."""

from .algebra import Algebra, AlgebraError, Element
from .exactlin import Matrix, Subspace, format_scalar, parse_scalar
from .maps import LinearMap
from .morita import CSLattice, GMAlgebra, MoritaContext, assemble, csl_algebra

__all__ = [
    "Algebra", "AlgebraError", "Element", "Matrix", "Subspace", "format_scalar", "parse_scalar",
    "LinearMap", "CSLattice", "GMAlgebra", "MoritaContext", "assemble", "csl_algebra",
]
