"""Exact equivariant K-theory of cominuscule flag varieties.

The package computes three-point K-theoretic Gromov-Witten invariants
of cominuscule homogeneous spaces through classical Euler
characteristics on auxiliary homogeneous spaces, entirely in exact
integer/rational arithmetic.
"""

from .errors import (
    CatalogError,
    InternalConsistencyError,
    KqError,
    ResourceLimitError,
    ValidationError,
)
from .roots import RootSystem, cartan_matrix, root_system

__version__ = "0.1.0"

__all__ = [
    "CatalogError",
    "InternalConsistencyError",
    "KqError",
    "ResourceLimitError",
    "RootSystem",
    "ValidationError",
    "cartan_matrix",
    "root_system",
    "__version__",
]
