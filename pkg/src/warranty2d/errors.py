"""Exception hierarchy.

Validation problems (bad inputs, malformed data or config) and numerical
problems (failed fits, non-convergent quadrature) are kept on separate
branches so the command line layer can map them to distinct exit codes.
"""


class WarrantyError(Exception):
    """Base class for all errors raised by this package."""


class DataError(WarrantyError):
    """Malformed or out-of-domain input data."""


class DomainError(WarrantyError):
    """Function argument outside its mathematical domain."""


class ConfigError(WarrantyError):
    """Invalid configuration value or key."""


class FitError(WarrantyError):
    """Estimation failed to converge or the data cannot support a fit."""


class NumericsError(WarrantyError):
    """Numerical evaluation produced an unusable result."""


class QuadratureError(NumericsError):
    """Numerical integration did not reach the requested tolerance."""


class OptimizerError(WarrantyError):
    """All optimization starts failed."""
