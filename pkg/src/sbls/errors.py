"""Exception types shared across the package."""


class SblsError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(SblsError, ValueError):
    """Matrix dimensions do not line up for the requested operation."""


class DomainError(SblsError, ValueError):
    """A scalar parameter is outside its admissible range."""


class SingularMatrixError(SblsError, ValueError):
    """A solve failed because the system matrix is rank deficient."""


class EmptyActiveSetError(SblsError, ValueError):
    """Thresholding removed every weight of an output dimension."""

    def __init__(self, output_dim: int):
        self.output_dim = output_dim
        super().__init__(
            f"active set of output dimension {output_dim} is empty; "
            "the threshold is too large for this problem"
        )


class InstabilityError(SblsError, RuntimeError):
    """A simulated trajectory left its physical/numerical bounds."""

    def __init__(self, message: str, step: int | None = None):
        self.step = step
        super().__init__(message)


class NumericalError(SblsError, RuntimeError):
    """An iterative solver produced non-finite intermediates."""


class CsvFormatError(SblsError, ValueError):
    """A dataset CSV file is malformed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(SblsError, ValueError):
    """An experiment config file contains an unknown or invalid entry."""
