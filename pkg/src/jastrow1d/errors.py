"""Shared exception types."""


class NumericsError(RuntimeError):
    """A numerical procedure failed to converge or produced an unusable result."""
