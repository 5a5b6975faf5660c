"""Exact checks and constructions for finite-dimensional color Hom-algebras."""

from .algebra import HomAlgebra, LinearMap, Product, Vector
from .document import load_algebra, save_algebra
from .dsl import evaluate_identity, parse_identity
from .operators import OperatorKind, check_morphism, check_operator
from .search import SearchSpec, search_operators
from .suites import check_suite, get_suite, list_suites

__version__ = "0.1.0"

__all__ = [
    "HomAlgebra", "LinearMap", "Product", "Vector", "load_algebra", "save_algebra",
    "evaluate_identity", "parse_identity", "OperatorKind", "check_morphism", "check_operator",
    "SearchSpec", "search_operators", "check_suite", "get_suite", "list_suites",
]
