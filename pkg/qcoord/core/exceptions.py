from typing import Iterable, Tuple


class QcoordError(ValueError):
    """Base class for every error raised on bad input to the engine."""


class ParameterError(QcoordError):
    pass


class OrderConstraintError(QcoordError):
    pass


class DimensionMismatchError(QcoordError):
    pass


class ConfigMismatchError(QcoordError):
    pass


class PreconditionError(QcoordError):
    pass


class UnsupportedVariantError(QcoordError):
    pass


class ExprSyntaxError(QcoordError):
    """
    Raised by the expression parser.

    `position` is the byte offset of the offending token in the source and
    `expected` lists the tokens that would have been accepted there.
    """

    def __init__(self, message: str, position: int, expected: Iterable[str] = ()):
        self.position = position
        self.expected: Tuple[str, ...] = tuple(sorted(set(expected)))
        detail = f"{message} at position {position}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)
