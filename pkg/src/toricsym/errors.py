"""Exception hierarchy shared by all modules.

The CLI maps these onto its exit-code contract: ``ParseError`` -> 2,
``PreconditionError`` -> 3.
"""

from __future__ import annotations


class ToricError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ToricError):
    """A fan/action/config document could not be parsed."""


class PreconditionError(ToricError):
    """A mathematical precondition of an operation is violated.

    ``reason`` is a short machine-readable slug (e.g. ``"incomplete"``),
    stable across releases; the message is for humans.
    """

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason
