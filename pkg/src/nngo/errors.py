"""Exception types shared across the engine."""


class DomainError(ArithmeticError):
    """An operation was applied outside its mathematical domain,
    e.g. the reciprocal of an interval containing zero."""


class PointOutsideBoxError(ValueError):
    """An evaluation point lies outside the variable box it belongs to."""


class MixedContextError(ValueError):
    """Relaxation values from incompatible variable spaces were combined."""


class ConvergenceFailureError(RuntimeError):
    """A scalar root solve did not reach the required residual tolerance."""


class ParseError(ValueError):
    """Expression source could not be parsed.

    Carries the byte offset of the failure and the set of token kinds
    that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: tuple = ()):
        self.offset = offset
        self.expected = tuple(expected)
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += " (expected " + ", ".join(self.expected) + ")"
        super().__init__(detail)


class SchemaError(ValueError):
    """A JSON document does not match the expected schema.

    ``field`` holds the path of the offending entry, e.g. ``layers[0].bias``.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ShapeError(SchemaError):
    """Array dimensions in a model file are inconsistent."""


class UnresolvedNameError(SchemaError):
    """An expression references a variable or network that is not declared."""


class SolverAbortError(RuntimeError):
    """The branch-and-bound run had to stop because a node could not be bounded.

    ``mode`` names the activation relaxation mode that failed (overflow in the
    exp-based rewrites is the expected cause).
    """

    def __init__(self, mode: str, message: str):
        self.mode = mode
        super().__init__(f"[mode={mode}] {message}")
