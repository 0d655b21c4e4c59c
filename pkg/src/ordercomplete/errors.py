"""Exception hierarchy.

Each error that can escape to the command line carries the exit code the CLI
reports for it.
"""


class OrderCompleteError(Exception):
    exit_code = 1


class ParseError(OrderCompleteError):
    """Malformed recipe text. ``position`` is a (line, column) pair."""

    exit_code = 2

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"line {position[0]}, column {position[1]}: {message}"
        super().__init__(message)


class EvaluationError(OrderCompleteError):
    exit_code = 3


class SeriesDivisionError(EvaluationError):
    """Division by a series that is zero to the working precision."""


class CoprimalityError(OrderCompleteError):
    exit_code = 4


class InsufficientPrecision(OrderCompleteError):
    exit_code = 5


class PrecisionError(InsufficientPrecision):
    pass


class DegenerateInput(OrderCompleteError):
    exit_code = 6


class GapError(OrderCompleteError):
    exit_code = 7


class InternalContractViolation(OrderCompleteError):
    exit_code = 8
