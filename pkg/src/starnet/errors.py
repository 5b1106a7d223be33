"""Exception hierarchy shared by every module.

The CLI maps :class:`ConfigError` to exit status 2 and every other
:class:`StarNetError` to exit status 3.
"""


class StarNetError(Exception):
    """Base class for all package errors."""


class NotHermitian(StarNetError):
    pass


class InvalidState(StarNetError):
    pass


class InvalidWeights(InvalidState):
    pass


class ComplexSpectrum(StarNetError):
    pass


class OutOfRange(StarNetError):
    pass


class NormExceeded(StarNetError):
    pass


class ZeroSuccess(StarNetError):
    """Filtering annihilates the state, so the post-selected state is undefined."""


class NonSeparableAssignment(StarNetError):
    pass


class UnsupportedN(StarNetError):
    pass


class ConfigError(StarNetError):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
