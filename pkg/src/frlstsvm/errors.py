"""Exception types shared across the package."""


class FrlstsvmError(Exception):
    """Base class for all errors raised by this package."""


class DataError(FrlstsvmError):
    """Raised when an input file or dataset fails validation."""


class ConfigurationError(FrlstsvmError):
    """Raised for invalid hyperparameters or settings, including a
    subsampling threshold that removes every majority instance."""


class DegenerateModelError(FrlstsvmError):
    """Raised when every hyperplane of a model has a zero normal, so no
    distance comparison is possible."""


class SingularSystemError(FrlstsvmError):
    """Raised when a linear system cannot be solved to the required
    residual accuracy even after ridge escalation."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ExperimentError(FrlstsvmError):
    """Raised when a cross-validation run cannot complete. Carries any
    fold records finished before the failure."""

    def __init__(self, message, partial_records=()):
        super().__init__(message)
        self.partial_records = list(partial_records)
