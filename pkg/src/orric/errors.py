"""Shared exception types."""


class InfeasibleError(Exception):
    """No decision can satisfy the per-slot compute budget."""


class CapExceededError(RuntimeError):
    """An exhaustive enumeration would exceed its configured size cap."""
