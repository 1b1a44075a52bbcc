"""Exception and warning types raised across the package."""


class CasimirError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CasimirError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class TableError(CasimirError, ValueError):
    """An optical or roughness data file could not be used."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class TableParseError(TableError):
    pass


class TableValidationError(TableError):
    pass


class PassivityError(CasimirError, ArithmeticError):
    """A round-trip amplitude reached |rho| >= 1, which no passive cavity allows."""


class SingularCompositionError(CasimirError, ArithmeticError):
    """Two networks with r_A * r_B == 1 cannot be composed."""


class ConvergenceError(CasimirError, RuntimeError):
    """A quadrature or series did not reach the requested tolerance.

    The best available estimate is kept on ``partial`` (and its error on
    ``error``) so callers can decide whether it is usable anyway.
    """

    def __init__(self, message, partial=None, error=None):
        super().__init__(message)
        self.partial = partial
        self.error = error


class OutOfRegimeError(CasimirError, ValueError):
    """Parameters fall outside every asymptotic regime that is implemented."""


class ConfigError(CasimirError, ValueError):
    """Invalid run configuration; ``line`` points into the config file when known."""

    def __init__(self, message, line=None, key=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
        self.key = key


class CasimirWarning(UserWarning):
    pass


class ExtrapolationWarning(CasimirWarning):
    """Tabulated data cover too small a range; extrapolation dominates."""


class ValidityWarning(CasimirWarning):
    """An approximation (PFA, perturbation theory) is used outside its comfort zone."""
