"""Exception hierarchy shared by every module of the package."""


class IgusaError(Exception):
    """Base class for all errors raised by this package."""


class BudgetExceeded(IgusaError):
    """Residue enumeration would visit more tuples than the configured budget."""


class InvalidCoset(IgusaError):
    pass


class DivisionByZero(IgusaError, ZeroDivisionError):
    pass


class Underdetermined(IgusaError):
    """Too few series terms to solve for the numerator and keep a held-out margin."""


class Inconsistent(IgusaError):
    """No denominator candidate reproduces the held-out series terms."""

    def __init__(self, message, failing_order=None):
        super().__init__(message)
        self.failing_order = failing_order


class NonIntegerTwist(IgusaError):
    pass


class NonIntegerPoint(IgusaError):
    pass


class UnsupportedElement(IgusaError):
    pass


class RamifiedCharacter(IgusaError):
    pass


class DimensionMismatch(IgusaError):
    pass


class ShapeMismatch(IgusaError):
    pass


class NoSeparator(IgusaError):
    pass


class WrongArity(IgusaError):
    pass


class UnsupportedFamily(IgusaError):
    pass


class BadCharacterString(IgusaError):
    pass


class ScenarioError(IgusaError):
    """Malformed scenario data (custom files, inconsistent stratifications)."""
