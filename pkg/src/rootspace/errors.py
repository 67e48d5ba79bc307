"""Exception hierarchy shared across the package.

Two bases matter to the CLI: ``DataError`` maps to exit code 2 and
``StatsError`` (statistical preconditions not met) maps to exit code 3.
"""


class RootspaceError(Exception):
    pass


class DataError(RootspaceError):
    pass


class StatsError(RootspaceError):
    pass


class DimensionMismatch(DataError):
    """Vector length disagrees with the expected dimension."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ZeroVector(DataError):
    """An all-zero vector where a direction is required."""
