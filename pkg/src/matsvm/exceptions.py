"""Exception hierarchy shared by every module."""


class MatSVMError(Exception):
    """Base class for all package errors."""


class DimensionError(MatSVMError, ValueError):
    """Operands have incompatible shapes."""


class ParameterError(MatSVMError, ValueError):
    """A scalar parameter is outside its valid range."""


class DegenerateLabelError(MatSVMError, ValueError):
    """A label column contains a single class."""

    def __init__(self, column, value):
        self.column = column
        self.value = value
        sign = "+1" if value > 0 else "-1"
        super().__init__(f"label column {column} contains only {sign}")


class NumericError(MatSVMError, ArithmeticError):
    """The solver produced a non-finite value."""

    def __init__(self, message, iteration=None):
        self.iteration = iteration
        if iteration is not None:
            message = f"{message} (iteration {iteration})"
        super().__init__(message)


class DataError(MatSVMError):
    """Dataset files are malformed or inconsistent."""


class ConfigError(MatSVMError):
    """An experiment configuration is invalid."""
