"""Exception hierarchy.

Everything raised on bad input derives from :class:`CfaError` so callers
(and the CLI) can separate validation failures from IO failures.
"""


class CfaError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(CfaError, ValueError):
    """Input data violates a shape, range or finiteness requirement."""


class MissingLabels(CfaError, ValueError):
    """A supervised computation was requested without labels."""


class HeaderMismatch(InvalidInput):
    """Class columns of a model file disagree with the first loaded file."""


class ParseError(InvalidInput):
    """A CSV cell could not be parsed as a finite decimal."""

    def __init__(self, path, row, col, message):
        self.path, self.row, self.col = path, row, col
        super().__init__(f"{path}: row {row}, column {col}: {message}")


class UnknownClass(InvalidInput):
    """A label refers to a class that does not exist."""


class InternalError(CfaError, RuntimeError):
    """An internal consistency check failed."""
