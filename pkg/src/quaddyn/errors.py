"""Shared exception types."""


class PrecisionError(RuntimeError):
    """A result could not be certified at the working precision.

    Carries a human-readable hint about what precision would be needed,
    when that is cheap to compute.
    """


class InvariantError(ValueError):
    """An input violates a documented precondition or invariant."""
