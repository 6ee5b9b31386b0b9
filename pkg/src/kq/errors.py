"""Error hierarchy shared by the library, the service and the CLI.

Exit-code mapping used by the command line client:
  1 usage, 2 validation / catalog problems, 3 resource limits,
  4 internal consistency failures.
"""

from __future__ import annotations


class KqError(Exception):
    exit_code = 2


class ValidationError(KqError):
    """Bad user input: unknown space, malformed labels, invalid degree."""

    exit_code = 2


class CatalogError(ValidationError):
    """The degree catalog has no usable entry for the request."""

    exit_code = 2

    def __init__(self, message: str, reason: str = "catalog-incomplete"):
        super().__init__(message)
        self.reason = reason


class ResourceLimitError(KqError):
    """A computation would exceed the configured enumeration cap."""

    exit_code = 3

    def __init__(self, message: str, required: int | None = None,
                 cap: int | None = None):
        super().__init__(message)
        self.required = required
        self.cap = cap


class InternalConsistencyError(KqError):
    """Two routes that must agree did not; indicates a bug, not bad input."""

    exit_code = 4
