"""Exception hierarchy.

Three families map onto the CLI exit codes: configuration problems (2),
data problems (3) and numerical failures (4).
"""


class VecmKitError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 1


class ConfigError(VecmKitError, ValueError):
    exit_code = 2


class DataError(VecmKitError, ValueError):
    exit_code = 3


class NumericalError(VecmKitError, ArithmeticError):
    exit_code = 4


# -- data ---------------------------------------------------------------------

class GapError(DataError):
    def __init__(self, year, column):
        self.year = year
        self.column = column
        super().__init__(f"missing value for column {column!r} in year {year}")


class OrderError(DataError):
    pass


class ParseError(DataError):
    def __init__(self, row, column, text=None):
        self.row = row
        self.column = column
        msg = f"cannot parse row {row}, column {column!r}"
        if text is not None:
            msg += f": {text!r}"
        super().__init__(msg)


class LengthError(DataError):
    pass


class NoOverlapError(DataError):
    pass


# -- numerical ----------------------------------------------------------------

class SingularDesignError(NumericalError):
    pass


class DegreesOfFreedomError(NumericalError):
    pass


class NotPDError(NumericalError):
    pass


class AsymmetricMatrixError(NumericalError):
    pass


class ZeroVarianceError(NumericalError):
    pass


class SampleTooSmallError(NumericalError):
    pass


class OrderUndeterminedError(NumericalError):
    pass


class SingularMomentError(NumericalError):
    pass


class EigenvalueDomainError(NumericalError):
    pass


class TableRangeError(NumericalError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class NoCointegrationError(NumericalError):
    pass


class NothingToTestError(NumericalError):
    pass
