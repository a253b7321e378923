"""Exception hierarchy shared by the services, the CLI and the HTTP layer."""


class CircuitError(Exception):
    """Base class for every error raised by this package."""


class GraphFormatError(CircuitError, ValueError):
    """Malformed graph, word, partition or transition text."""

    def __init__(
        self, message: str, line: int | None = None, token: str | None = None
    ) -> None:
        self.message = message
        self.line = line
        self.token = token
        super().__init__(str(self))

    def __str__(self) -> str:
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.token is not None:
            where.append(f"token {self.token!r}")
        if where:
            return f"{', '.join(where)}: {self.message}"
        return self.message


class GraphStructureError(CircuitError):
    """Degree or occurrence counts are wrong, or a half-edge has no mate.

    Not a ValueError: model validators raise it and pydantic must let it
    propagate unwrapped.
    """


class NotInterlacedError(CircuitError, ValueError):
    """A transposition was requested for a pair that is not interlaced."""


class OrientationError(CircuitError, ValueError):
    """An oriented-case operation received a partition with a psi transition."""


class SingularMatrixError(CircuitError, ArithmeticError):
    """Inverse requested for a singular matrix."""


class ShapeError(CircuitError):
    """Matrix dimensions or index sets do not agree."""


class SweepLimitError(CircuitError, ValueError):
    """An exhaustive sweep was requested above the configured vertex cap."""


class InvariantViolation(CircuitError, AssertionError):
    """An identity that must hold for every input did not."""
