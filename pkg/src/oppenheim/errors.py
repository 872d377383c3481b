"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class OppenheimError(Exception):
    """Base class for all package errors."""


class DomainError(OppenheimError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class SpecSyntaxError(OppenheimError, ValueError):
    """A textual real or rational literal could not be parsed."""


class InvalidProfile(DomainError):
    """Diophantine profile parameters violate mu >= 2 or sigma > 0."""


class NotUnimodular(DomainError):
    """A rational matrix does not have determinant one."""


class NotReducible(DomainError):
    """A form cannot be brought to the diagonal model over the rationals."""


class BadGenerator(DomainError):
    """A rational-approximation generator broke its accuracy contract."""


class OracleContradiction(OppenheimError):
    """A decimal oracle returned digits inconsistent with earlier answers."""


class PrecisionExhausted(OppenheimError):
    """The precision budget ran out before a decision could be certified.

    ``reached`` records how far the computation got (a precision in bits or
    an index, depending on the caller) and ``partial`` carries any partial
    result worth returning.
    """

    def __init__(self, message: str, reached=None, partial=None):
        super().__init__(message)
        self.reached = reached
        self.partial = partial


class DiscriminantUndecided(PrecisionExhausted):
    """The sign of a line discriminant could not be certified."""


class UndecidedTie(PrecisionExhausted):
    """Two oracle candidates could not be separated within the budget."""

    def __init__(self, message: str, candidates=()):
        super().__init__(message, partial=tuple(candidates))
        self.candidates = tuple(candidates)


class NoSolutionWithinHorizon(OppenheimError):
    """The solver exhausted its index horizon without a certified hit."""

    def __init__(self, message: str, last_index=None):
        super().__init__(message)
        self.last_index = last_index
