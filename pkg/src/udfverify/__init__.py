"""Drinfeld twists, universal deformation formulas and certified seminorm bounds.

The package is organised bottom-up:

- ``enveloping``: exact arithmetic in U(g) and its tensor powers
- ``twists``: the abelian, ax+b and Heisenberg-type twist families
- ``repspaces``: polynomial representation spaces and differential operators
- ``starprod``: star products obtained from a twist
- ``seminorms``: interval enclosures of analytic-vector seminorms
- ``estimates``: checks of the Cauchy/continuity/equicontinuity inequalities
"""

from udfverify.errors import (
    AntisymmetryViolation,
    ClosureFailure,
    CombinatorialBudgetExceeded,
    DegreeCapExceeded,
    EmbeddingMismatch,
    JacobiViolation,
    MalleabilityViolation,
    NotAnEigenvector,
    ScalarModeMismatch,
    TailNotCertified,
    TruncationNotCertified,
    UnsupportedFamilyOrder,
    UdfError,
)
from udfverify.scalars import GaussQ, parse_scalar

__all__ = [
    "AntisymmetryViolation",
    "ClosureFailure",
    "CombinatorialBudgetExceeded",
    "DegreeCapExceeded",
    "EmbeddingMismatch",
    "GaussQ",
    "JacobiViolation",
    "MalleabilityViolation",
    "NotAnEigenvector",
    "ScalarModeMismatch",
    "TailNotCertified",
    "TruncationNotCertified",
    "UdfError",
    "UnsupportedFamilyOrder",
    "parse_scalar",
]

__version__ = "0.1.0"
