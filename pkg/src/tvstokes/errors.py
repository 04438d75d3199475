"""Exception hierarchy shared by all modules."""

__all__ = [
    "TvStokesError",
    "DimensionError",
    "ParameterError",
    "VolumeFormatError",
    "DivergenceError",
]


class TvStokesError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(TvStokesError, ValueError):
    """An array shape or axis length violates an operator's requirements."""


class ParameterError(TvStokesError, ValueError):
    """A solver or CLI parameter is outside its admissible range."""


class VolumeFormatError(TvStokesError, RuntimeError):
    """A raw payload or JSON header is malformed or inconsistent."""


class DivergenceError(TvStokesError, ArithmeticError):
    """Non-finite values appeared during an iterative solve."""
