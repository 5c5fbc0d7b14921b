"""Exact circle combinatorics, Siegel-disk numerics, and Julia-set tooling."""

__version__ = "0.1.0"

from .errors import InvariantError, PrecisionError

__all__ = ["InvariantError", "PrecisionError", "__version__"]
