"""Shared exception types.

Every error carries an optional source span so DSL-originated failures can be
reported with a location; errors raised from the programmatic API leave it None.
"""

from __future__ import annotations


class TaskrelError(Exception):
    def __init__(self, message: str, span=None):
        super().__init__(message)
        self.message = message
        self.span = span


class BoundaryMismatch(TaskrelError):
    """Domain/codomain objects do not line up for the requested operation."""


class CarrierMismatch(TaskrelError):
    """An attribute's carrier is not the object the operation expects."""


class SplitMismatch(TaskrelError):
    """A declared factor split does not fit the object being split."""


class BudgetExceeded(TaskrelError):
    """An enumeration would exceed its budget; nothing was truncated silently."""


class NonAntichainDeclaration(TaskrelError):
    """A declared family of attributes contains strictly nested members."""


class DeclarationError(TaskrelError):
    """A malformed or conflicting declaration (duplicate name, bad element, ...)."""


class LexError(TaskrelError):
    """Illegal input at the token level."""


class ParseError(TaskrelError):
    """Token stream does not match the grammar."""


class TypecheckError(TaskrelError):
    """A parsed declaration or term failed semantic checks."""


class UnknownIdentifier(TypecheckError):
    """Reference to a name with no declaration."""
