"""Exception types shared across the package."""


class GrammodError(Exception):
    """Base class for all library errors."""


class GraphError(GrammodError, ValueError):
    """A graph would violate a structural invariant."""


class RuleError(GrammodError, ValueError):
    """A rule core would violate a structural invariant."""


class ParseError(GrammodError, ValueError):
    """Malformed input text, with an optional 1-based line/column."""

    def __init__(self, message, line=None, column=None, source=None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = ""
        if source:
            where = f"{source}:"
        if line is not None:
            where += f"{line}:{column}:" if column is not None else f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class StrategyError(GrammodError):
    """Evaluation of a strategy program failed."""
