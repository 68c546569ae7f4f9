"""Exception hierarchy shared by every layer of the engine."""


class QSeriesError(Exception):
    """Base class for all engine errors."""


class RingMismatch(QSeriesError, TypeError):
    """Operands live in different coefficient rings."""


class UnsupportedModulus(QSeriesError, ValueError):
    pass


class NotInvertible(QSeriesError, ArithmeticError):
    """Leading coefficient is not a unit of the coefficient ring."""


class OutOfWindow(QSeriesError, IndexError):
    pass


class DivergentProduct(QSeriesError, ValueError):
    pass


class NonTruncating(QSeriesError, ValueError):
    pass


class TruncationUnsound(QSeriesError, ValueError):
    """A sum could not be cut off soundly at the requested order."""


class ErrorTermRequired(QSeriesError, ValueError):
    pass


class SingularB(QSeriesError, ValueError):
    pass


class BaseMismatch(QSeriesError, ValueError):
    pass


class BudgetExceeded(QSeriesError, ValueError):
    pass


class NotOracleable(QSeriesError, ValueError):
    pass


class UnknownIdentity(QSeriesError, KeyError):
    pass


class DuplicateIdentity(QSeriesError, ValueError):
    pass


class DslError(QSeriesError, ValueError):
    """Malformed or unevaluable expression text; carries a source position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(message + where)


class UnboundIndex(DslError):
    pass
