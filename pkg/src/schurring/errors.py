"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class SchurError(Exception):
    """Base class for all errors raised by :mod:`schurring`."""


class InvalidFactorError(SchurError, ValueError):
    pass


class ParseError(SchurError, ValueError):
    pass


class SizeError(SchurError):
    """A desk-scale bound was exceeded."""


class ContainmentError(SchurError, ValueError):
    pass


class ShapeError(SchurError, ValueError):
    """The group does not have the shape an operation is defined for."""


class SRingAxiomError(SchurError, ValueError):
    """A partition fails one of the S-ring axioms.

    ``kind`` is one of ``not-a-partition``, ``identity-not-singleton-class``,
    ``not-inverse-closed`` or ``not-module-closed``; ``witness`` carries the
    offending data.
    """

    def __init__(self, kind: str, message: str, witness=None):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.witness = witness


class NotASectionError(SchurError, ValueError):
    pass


class NotAnIsomorphismError(SchurError, ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class AutLiftingError(SchurError):
    """An automorphism of a quotient scheme has no lift to the subgroup scheme."""


class AdmissibilityError(SchurError, ValueError):
    pass


class ClassificationError(SchurError):
    """No classification statement matched an S-ring."""


class InternalInvariantError(SchurError, AssertionError):
    pass
