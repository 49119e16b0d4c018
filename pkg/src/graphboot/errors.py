"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto exit codes: ``InvalidInputError`` (and its
subclasses) exit with 2, ``SizeLimitError`` exits with 3.
"""


class GraphBootError(Exception):
    pass


class InvalidInputError(GraphBootError, ValueError):
    """Input data is malformed or violates a contract."""


class ParseError(InvalidInputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(InvalidInputError):
    """An argument lies outside the mathematical domain of the operation."""


class NotInfectedError(InvalidInputError):
    """The requested edge is not in the closure."""


class TrivialWitnessError(InvalidInputError):
    """The requested edge is already a seed edge."""


class UnsupportedPatternError(InvalidInputError):
    pass


class SizeLimitError(GraphBootError):
    """The instance is too large for the (exhaustive or exact) method asked for."""
