"""Exception types raised across the package."""


class FieldError(ValueError):
    """Invalid field specification (non-prime p, reducible modulus, bad degree)."""


class SubfieldError(ValueError):
    """An element does not lie in the subfield a relative operation requires."""


class InvalidSubspaceError(ValueError):
    """Parameters violate the side conditions of a subspace family."""


class CapExceededError(RuntimeError):
    """An exhaustive routine was asked to run beyond its configured size cap."""


class CertificationError(AssertionError):
    """Two independent computations of the same verdict disagree."""


class NoWitnessError(RuntimeError):
    """An existence search finished without finding a witness."""
