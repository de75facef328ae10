"""Exception hierarchy shared across the toolkit.

Exit-code mapping lives in the CLI: DataError -> 2, ConvergenceError -> 3.
"""


class CorpusKitError(Exception):
    """Base class for all toolkit errors."""


class DataError(CorpusKitError):
    """Invalid input data or violated precondition."""


class ParseError(DataError):
    """Malformed file content; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)
        self.line = line


class ConvergenceError(CorpusKitError):
    """Iterative fit failed to reach tolerance; carries the best fit found."""

    def __init__(self, message, best_fit=None, residual=None):
        super().__init__(message)
        self.best_fit = best_fit
        self.residual = residual
