"""Exception types shared across the package.

Three broad families, mirrored by the CLI exit codes: configuration
errors (bad hyperparameters, unknown names), data errors (files,
parsing, shapes), and numerical errors (overflow, singular systems).
"""


class ExlassoError(Exception):
    """Base class for all package errors."""


class ConfigError(ExlassoError):
    """Invalid configuration or hyperparameter."""


class DataError(ExlassoError):
    """Invalid input data or file."""


class NumericalError(ExlassoError):
    """Numerical failure during computation."""


# -- data ----------------------------------------------------------------

class EmptyData(DataError):
    pass


class ConstantColumn(DataError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"column {column} is constant (zero sample variance)")


class ParseError(DataError):
    def __init__(self, row, col, message=""):
        self.row = row
        self.col = col
        super().__init__(f"cannot parse cell at row {row}, column {col}: {message}")


class MissingColumn(DataError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"response column {name!r} not found")


class NonFiniteValue(DataError):
    def __init__(self, row, col):
        self.row = row
        self.col = col
        super().__init__(f"non-finite value at row {row}, column {col}")


class DimensionMismatch(DataError):
    pass


class NotStandardized(DataError):
    pass


# -- configuration -------------------------------------------------------

class InvalidSpec(ConfigError):
    pass


class EmptyLambdaGrid(ConfigError):
    pass


class EmptyPath(ConfigError):
    pass


class FoldTooSmall(ConfigError):
    pass


class SubsampleTooSmall(ConfigError):
    pass


class SeriesTooShort(ConfigError):
    pass


class ZeroCoefficient(ConfigError):
    pass


# -- numerics ------------------------------------------------------------

class ResidualOverflow(NumericalError):
    pass


class StepUnderflow(NumericalError):
    pass


class SingularSystem(NumericalError):
    def __init__(self, condition_number):
        self.condition_number = condition_number
        super().__init__(
            f"influence system is ill-conditioned (cond = {condition_number:.3e})"
        )


class EmptyActiveSet(NumericalError):
    pass
