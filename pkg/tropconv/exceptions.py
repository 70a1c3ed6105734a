"""
Exceptions

Every error raised by the engines derives from TropconvError and carries the
exit code the command-line surface maps it to.
"""

from typing import Optional


class TropconvError(Exception):
    """Base class for all tropconv errors."""

    exit_code = 1

    def __init__(self, message: str, detail: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail


class DimensionError(TropconvError):
    """Set functions live on lattices of different (or unsupported) order."""


class DomainError(TropconvError):
    """A value or parameter lies outside the domain of the operation."""


class ArithmeticOverflowError(TropconvError):
    """Exact ring arithmetic would leave the representable regime."""


class IntegrityError(TropconvError):
    """A solver broke its stated contract."""

    exit_code = 3


class UsageError(TropconvError):
    """Incompatible or malformed command-line arguments."""


class ParseError(TropconvError):
    """An input file could not be parsed."""

    exit_code = 2

    def __init__(self, message: str, index: Optional[int] = None, detail: Optional[str] = None):
        super().__init__(message, detail)
        self.index = index


class VerificationError(TropconvError):
    """An oracle check found a mismatch or a violated guarantee."""

    exit_code = 3
