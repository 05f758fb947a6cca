"""Exception types raised by the library."""


class CVQKDError(Exception):
    """Base class for all library errors."""


class InvalidArgument(CVQKDError, ValueError):
    """An input lies outside its documented domain."""


class InvalidState(InvalidArgument):
    """A covariance matrix or spectrum violates the uncertainty principle."""


class NumericFailure(CVQKDError, ArithmeticError):
    """A numerical routine produced an inconsistent or degenerate result."""
