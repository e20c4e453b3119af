"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: configuration 2, budget 3,
numeric/domain 4. Plain ``ValueError`` is reserved for usage errors
(bad arguments to library calls).
"""

from __future__ import annotations


class VoxpopError(Exception):
    """Base class for package errors."""


class ConfigurationError(VoxpopError):
    """Invalid specification or scenario config; names the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class BudgetError(VoxpopError):
    """A run was refused because it exceeds the agent-step budget."""


class DomainError(VoxpopError):
    """A closed-form analytics input lies outside its mathematical domain."""


class UnsupportedOperationError(VoxpopError):
    """Operation not available in the requested mode (e.g. empirical macro)."""
