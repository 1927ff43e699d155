"""Exception types raised across the package."""


class NNGPKrigError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(NNGPKrigError, ValueError):
    pass


class NotPositiveDefinite(NNGPKrigError, ValueError):
    """Cholesky hit a non-positive pivot.

    ``index`` is the 0-based position of the failing pivot and ``value`` the
    pivot value that was encountered (``<= 0``).  ``context`` carries an
    optional description of the kernel that produced the matrix.
    """

    def __init__(self, index, value, context=None):
        self.index = int(index)
        self.value = float(value)
        self.context = context
        msg = f"matrix is not positive definite: pivot {self.index} has value {self.value:.6g}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class NonPositiveDiagonal(NNGPKrigError, ValueError):
    pass


class NonPositiveVariance(NNGPKrigError, ValueError):
    pass


class UnsupportedSmoothness(NNGPKrigError, ValueError):
    pass


class DegenerateColumn(NNGPKrigError, ValueError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"training column {column} is constant")


class RankDeficientDesign(NNGPKrigError, ValueError):
    pass


class ParseError(NNGPKrigError, ValueError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class MissingColumn(NNGPKrigError, ValueError):
    pass


class InsufficientRows(NNGPKrigError, ValueError):
    pass


class LengthMismatch(NNGPKrigError, ValueError):
    pass


class ShapeMismatch(NNGPKrigError, ValueError):
    pass


class AllThetaInvalid(NNGPKrigError, RuntimeError):
    pass


class InsufficientThetas(NNGPKrigError, ValueError):
    pass
