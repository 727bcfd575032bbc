"""Exception hierarchy.

Precondition failures derive from ``ValueError``; failures of identities that
hold as theorems derive from ``RuntimeError`` because they can only mean a bug.
"""


class HJRelaxError(Exception):
    pass


class InvalidInputs(HJRelaxError, ValueError):
    pass


class InvalidHamiltonian(InvalidInputs):
    pass


class InvalidBoundary(InvalidInputs):
    pass


class NotSemiCoercive(InvalidBoundary):
    pass


class UnboundedAbove(InvalidInputs):
    pass


class UnboundedBelow(InvalidInputs):
    pass


class InternalMismatch(HJRelaxError, RuntimeError):
    pass


class RootNotFound(InternalMismatch):
    pass


class CflViolation(InvalidInputs):
    pass


class DomainTooShort(InvalidInputs):
    pass


class ParseError(InvalidInputs):
    pass


class ValidationError(InvalidInputs):
    pass
