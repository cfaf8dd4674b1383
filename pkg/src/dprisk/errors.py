"""Exceptions shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the domain where a formula is defined."""


class InfeasibleError(ValueError):
    """A risk profile or schedule cannot be met by any privacy budget."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details
