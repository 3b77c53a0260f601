"""Exception hierarchy for the toolkit.

Data errors (bad rows, unknown ids, domain violations) are distinct from
schema/config errors so the CLI can map them to exit codes consistently.
"""

from __future__ import annotations


class RetraceError(Exception):
    """Base class for all toolkit errors."""


class SchemaError(RetraceError):
    """Input schema is unusable (e.g., a required column is missing)."""


class ConfigError(RetraceError):
    """Configuration failed validation."""


class DomainError(RetraceError, ValueError):
    """Inputs violate a domain precondition (e.g., citation predates
    publication)."""


class AdapterError(RetraceError):
    """A citation source returned a payload we cannot interpret.

    The raw payload is preserved for debugging.
    """

    def __init__(self, message: str, raw: bytes | None = None):
        super().__init__(message)
        self.raw = raw


class TransientFetchError(RetraceError):
    """Retryable fetch failure (network error, 5xx)."""


class QuarantineError(RetraceError):
    """An entity cannot enter the analysis set; carries the reason shown
    in the reviewable quarantine queue."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason
