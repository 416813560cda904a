"""Irreducible SU(2,1) representations of Brieskorn homology spheres.

The library is split along the computation:

* ``linalg``        the (2,1) form, membership, eigenvalues and their types
* ``traces``        word traces and the trace identities for pairs
* ``domain``        the hat matrix, its image D and the trace map
* ``presentation``  Seifert weights and admissible eigenvalue data
* ``search``        slice sweep, certification and deduplication
* ``io``            JSON records, exact forms and tables
"""

from .domain import DomainMatrix, hat, in_domain_D, phi, phi_of_M, reconstruct_P
from .linalg import (
    DEFAULT_TOL,
    EigenType,
    ElementClass,
    ToleranceConfig,
    classify_element,
    eigen_triple,
    eigenvalue_type,
    herm_form,
    is_su21,
    random_su21,
    su21_inverse,
)
from .presentation import BrieskornPresentation, ClassLabel, solve_weights
from .search import RepPoint, SearchConfig, certify, search

__version__ = "0.1.0"

__all__ = [
    "BrieskornPresentation",
    "ClassLabel",
    "DEFAULT_TOL",
    "DomainMatrix",
    "EigenType",
    "ElementClass",
    "RepPoint",
    "SearchConfig",
    "ToleranceConfig",
    "certify",
    "classify_element",
    "eigen_triple",
    "eigenvalue_type",
    "hat",
    "herm_form",
    "in_domain_D",
    "is_su21",
    "phi",
    "phi_of_M",
    "random_su21",
    "reconstruct_P",
    "search",
    "solve_weights",
    "su21_inverse",
]
