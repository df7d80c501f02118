"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the operation is defined."""


class InfiniteFluxError(ArithmeticError):
    """The normalized flux integral of the field diverges."""


class InvalidFieldError(ValueError):
    """The field profile takes negative values."""


class DiscretizationError(ArithmeticError):
    """A matrix entry came out non-finite."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class TruncationError(RuntimeError):
    """A mode outside the certified window still carries eigenvalues below the threshold."""
