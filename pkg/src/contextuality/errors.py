"""Exception types shared across the package.

Parse errors mean the input text could not be decoded at all; validation
errors mean well-formed input that violates a semantic contract. The CLI
maps them to distinct exit codes.
"""


class ParseError(ValueError):
    """Malformed serialized input (JSON shape, fraction, outcome or Pauli string)."""


class ValidationError(ValueError):
    """Well-formed input violating a semantic invariant."""


class SizeLimitError(ValidationError):
    """An operation refused because the instance exceeds its size cap."""


class ClosureLimitError(SizeLimitError):
    """Partial closure exceeded the member cap."""


class NonCommutingContextError(ValidationError):
    """A joint measurement was requested for non-commuting observables."""
