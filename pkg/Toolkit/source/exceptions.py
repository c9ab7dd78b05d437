"""
This module contains custom exceptions related to error handling.

Classes:
- ParameterError: Raised when a parameter is outside its domain.
- InvalidModulusError: Raised when a cyclic modulus is not positive.
- InvalidRangeError: Raised when a cyclic interval has a negative length.
- DemandError: Raised when a demand vector is malformed.
- WrongCaseError: Raised when a construction is used outside its case.
- InvariantError: Raised when an internal invariant is broken.
- ShapeError: Raised when an array does not have the expected shape.
- PdaParseError: Raised when serialized array text is malformed.
- ResourceGuardError: Raised when a search would exceed its effort limits.
- DecodeError: Raised when a user cannot recover a packet.
"""

import logging

logger = logging.getLogger(__name__)


class ParameterError(ValueError):
    """Raised when a parameter is outside its domain."""


class InvalidModulusError(ParameterError):
    """Raised when a cyclic modulus is not positive."""


class InvalidRangeError(ParameterError):
    """Raised when a cyclic interval has a negative length."""


class DemandError(ParameterError):
    """Raised when a demand vector is malformed."""


class WrongCaseError(Exception):
    """Raised when a construction is used outside its case."""


class InvariantError(Exception):
    """Raised when an internal invariant is broken."""


class ShapeError(Exception):
    """Raised when an array does not have the expected shape."""


class PdaParseError(Exception):
    """Raised when serialized array text is malformed."""
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        logger.debug("Parse error at %d:%d: %s", line, column, message)
        super().__init__(f"line {line}, column {column}: {message}")


class ResourceGuardError(Exception):
    """Raised when a search would exceed its effort limits."""


class DecodeError(Exception):
    """Raised when a user cannot recover a packet."""
    def __init__(self, message: str, row=None, symbol=None):
        self.row = row
        self.symbol = symbol
        super().__init__(message)
