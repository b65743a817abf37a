"""Shared exception types for parameter and size violations."""


class InvalidParameter(ValueError):
    """An argument is outside its documented domain."""


class UnsupportedSize(ValueError):
    """The instance is too large for an exhaustive/exact routine."""
