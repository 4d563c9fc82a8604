"""Exception types shared across the package."""


class ChartMismatch(ValueError):
    """Operands live on charts of different dimension, or mix forms with multivectors."""


class InvalidInput(ValueError):
    """An argument violates a documented precondition (arity, degree range, bad key)."""


class InvalidPermutation(ValueError):
    """A sequence of images does not describe a bijection of {1..k}."""


class DegreeMixError(ValueError):
    """A sum or product mixes exterior degrees in a way that has no meaning."""


class FormSyntaxError(SyntaxError):
    """Malformed expression text.  ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ValidationError(ValueError):
    """A candidate structure form failed validation."""


class DegreeMismatchError(ValidationError):
    """The candidate form does not have the degree required by the chart."""


class NotClosedError(ValidationError):
    """The candidate form is not closed; carries the nonzero exterior derivative."""

    def __init__(self, message: str, residual):
        super().__init__(message)
        self.residual = residual


class DegenerateError(ValidationError):
    """The candidate form has a kernel; carries a witness vector field."""

    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


class DegeneracyWarning(UserWarning):
    """Generic rank is full but the coefficient matrix drops rank at a sample point."""
