"""Error types shared across the package, plus the Violation record.

Validators report findings as :class:`Violation` values rather than raising;
exceptions are reserved for operations whose preconditions were broken or
whose input cannot be interpreted at all.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """1-based position inside an input file."""

    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Violation:
    """One validation finding: a code, the offending id, and a message."""

    code: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}({self.subject}): {self.message}"


class RocError(Exception):
    """Base class for every error raised by this package."""


class ParseError(RocError):
    """DSL input could not be tokenized or parsed.

    The message is reproducible byte-for-byte for a given input.
    """

    def __init__(self, span: SourceSpan, expected: str, found: str):
        self.span = span
        self.expected = expected
        self.found = found
        super().__init__(f"{span}: expected {expected}, found {found}")


class ValidationError(RocError):
    """An operation needed a valid artifact but validation found violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        head = str(self.violations[0]) if self.violations else "invalid input"
        extra = len(self.violations) - 1
        super().__init__(head if extra <= 0 else f"{head} (+{extra} more)")


class NotEnabledError(RocError):
    """A fragment was fired in a marking that does not enable it."""


class UnknownFragmentError(RocError):
    """A fragment id does not exist in the model it was looked up in."""


class UnknownNodeError(RocError):
    """A goal-graph node id does not exist."""


class ModelKindError(RocError):
    """A model of the wrong kind (as-is vs to-be) was passed."""


class CorrespondenceError(RocError):
    """A place correspondence is non-injective or references unknown places."""


class UnknownProblemError(RocError):
    """A problem id is not present in the supplied registry."""


class EmptyCaseBaseError(RocError):
    """Retrieval was attempted against a case base with no scenarios."""


class DuplicateIdError(RocError):
    """A scenario id is already present and overwrite was not requested."""


class StorageError(RocError):
    """The case-base directory could not be read or written."""


class UnknownFormatError(RocError):
    """An unsupported report format name was requested."""
