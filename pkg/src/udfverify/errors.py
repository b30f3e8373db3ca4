"""Exception hierarchy."""

from __future__ import annotations


class UdfError(Exception):
    """Base class for all errors raised by this package."""


class AntisymmetryViolation(UdfError):
    def __init__(self, triple, message=None):
        self.triple = triple
        super().__init__(message or f"structure constants not antisymmetric at (i, j, k) = {triple}")


class JacobiViolation(UdfError):
    def __init__(self, triple, message=None):
        self.triple = triple
        super().__init__(message or f"Jacobi identity fails for basis triple {triple}")


class EmbeddingMismatch(UdfError):
    def __init__(self, pair, message=None):
        self.pair = pair
        super().__init__(message or f"matrix commutator disagrees with structure constants at {pair}")


class ClosureFailure(UdfError):
    """A matrix commutator does not lie in the span of the embedded basis."""


class DegreeCapExceeded(UdfError):
    def __init__(self, degree, cap):
        self.degree = degree
        self.cap = cap
        super().__init__(f"monomial degree {degree} exceeds configured cap {cap}")


class ScalarModeMismatch(UdfError):
    """Exact and floating scalars were mixed in one computation."""


class MalleabilityViolation(UdfError):
    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"Leibniz rule fails: {witness}")


class NotAnEigenvector(UdfError):
    pass


class CombinatorialBudgetExceeded(UdfError):
    pass


class TruncationNotCertified(UdfError):
    pass


class TailNotCertified(UdfError):
    pass


class UnsupportedFamilyOrder(UdfError):
    pass
