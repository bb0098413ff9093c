"""Exception hierarchy shared by the numerics, oracle and CLI layers."""

from __future__ import annotations


class BesselError(Exception):
    pass


class BesselDomainError(BesselError, ValueError):
    """Argument outside the domain of the requested function."""


class ConvergenceError(BesselError, ArithmeticError):
    """A series, continued fraction or quadrature did not settle within its cap."""


class FactorizationError(BesselError, ArithmeticError):
    """Covariance matrix is not numerically positive definite."""


class OracleDisagreementError(BesselError):
    pass


class OracleUnavailableError(BesselError, ImportError):
    pass


class ConfigError(BesselError, ValueError):
    pass


class DatasetError(BesselError, ValueError):
    pass


class NumericOverflowError(BesselError, OverflowError):
    """An intermediate left the double range."""
