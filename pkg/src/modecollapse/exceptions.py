class ValidationError(ValueError):
    """Raised when an input distribution, matrix or file fails validation."""


class EnumerationLimitError(ValidationError):
    """Raised when an exhaustive enumeration would exceed its size guard."""


class DomainError(ValueError):
    """Raised when a scalar argument falls outside the admissible domain."""
