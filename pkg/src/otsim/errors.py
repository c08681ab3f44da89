"""Exception hierarchy shared by all model modules and the CLI."""


class OtsimError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code = 1


class DomainError(OtsimError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""

    exit_code = 4


class DegenerateInputError(DomainError):
    """Input data cannot determine the requested quantity (rank deficiency)."""


class ConfigError(OtsimError):
    """Malformed or inconsistent configuration."""

    exit_code = 3


class IngestError(OtsimError):
    """A data file could not be parsed into the expected table."""

    exit_code = 6

    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column


class NumericError(OtsimError, ArithmeticError):
    """A numerical procedure failed to converge or diverged."""

    exit_code = 5


class ThermalRunawayError(NumericError):
    """No bounded electrothermal steady state exists below the ceiling."""

    def __init__(self, message, voltage=None, t_max=None):
        super().__init__(message)
        self.voltage = voltage
        self.t_max = t_max


class InstabilityError(NumericError):
    """A time integration left the configured amplitude bound."""


class FitError(NumericError):
    """Least-squares fit did not converge; carries the best iterate found."""

    def __init__(self, message, best=None, residual=None, iterations=None):
        super().__init__(message)
        self.best = best
        self.residual = residual
        self.iterations = iterations
