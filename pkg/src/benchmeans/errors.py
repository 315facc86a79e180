"""Exception hierarchy.

Every error raised on bad *data* derives from :class:`BenchmeansError`; the
command line maps those to exit status 1.
"""


class BenchmeansError(Exception):
    """Base class for data and validation errors."""


# means
class EmptyVector(BenchmeansError, ValueError):
    pass


class NonPositiveValue(BenchmeansError, ValueError):
    pass


class TooFewValues(BenchmeansError, ValueError):
    pass


# schema / parsing
class SchemaError(BenchmeansError, ValueError):
    pass


class MalformedNumber(BenchmeansError, ValueError):
    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class UnknownColumn(BenchmeansError, ValueError):
    pass


class DuplicateSystem(BenchmeansError, ValueError):
    pass


# aggregation
class MissingCell(BenchmeansError, LookupError):
    pass


class EmptyAfterSkip(BenchmeansError, ValueError):
    pass


class NoReference(BenchmeansError, LookupError):
    pass


class DivisionByZeroReference(BenchmeansError, ZeroDivisionError):
    pass


# ranking
class TooFewSystems(BenchmeansError, ValueError):
    pass


class InvalidK(BenchmeansError, ValueError):
    pass
