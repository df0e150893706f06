"""Exception hierarchy shared by all qdim modules.

The CLI maps these onto process exit codes (see ``qdim.cli``):
validation problems exit 2, resource guards exit 3, internal invariant
violations exit 4.
"""


class QdimError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(QdimError):
    """Invalid input: bad arguments, malformed config, failed precondition."""


class ParseError(ValidationError):
    """Syntax error in a representation expression.

    Carries the character offset of the failure and the set of token
    descriptions that would have been accepted there.
    """

    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = frozenset(expected)
        detail = f"{message} at offset {position}"
        if self.expected:
            detail += " (expected: " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(detail)


class CatalogMismatchError(ValidationError):
    """An expression atom does not belong to the configured catalog."""


class MultisetMismatchError(QdimError):
    """Multiset subtraction met an element with no close-enough partner.

    Carries the orphan value, the closest unused candidate and their gap,
    so callers can distinguish tolerance trouble from genuinely
    inconsistent catalog data.
    """

    def __init__(self, message, orphan=None, closest=None, gap=None):
        self.orphan = orphan
        self.closest = closest
        self.gap = gap
        super().__init__(message)


class ResourceGuardError(QdimError):
    """A computation would exceed the configured size bounds."""


class InternalInvariantError(QdimError):
    """A statement that is a theorem failed numerically: implementation bug."""


class TheoremViolationError(InternalInvariantError):
    """An audited proof inequality failed; signals a bug, never a finding."""


class ConvergenceError(InternalInvariantError):
    """An iterative numerical routine did not converge within its limits."""
