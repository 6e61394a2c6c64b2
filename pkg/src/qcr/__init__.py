"""Qualitative constraint reasoning over multi-algebras."""

from .catalog import load_catalog
from .multialg import MultiAlgebra, MultiRelation, Projection
from .qcn import Network, Refused, algebraic_closure, satisfiable
from .relalg import Algebra, Relation

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "MultiAlgebra",
    "MultiRelation",
    "Network",
    "Projection",
    "Refused",
    "Relation",
    "algebraic_closure",
    "load_catalog",
    "satisfiable",
]
