"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations

__all__ = [
    "QLGError",
    "DomainError",
    "NotInvolution",
    "InvalidParity",
    "BudgetExceeded",
    "NoRoot",
    "BadAxis",
    "ConstraintViolated",
    "ConfigError",
]


class QLGError(ValueError):
    """Base class for all errors raised by :mod:`qlgdirac`."""


class DomainError(QLGError):
    """A physical parameter lies outside the domain where an operator is defined."""


class NotInvolution(QLGError):
    """A matrix expected to square to the identity does not."""


class InvalidParity(QLGError):
    """``N - M`` is odd, so no lattice path connects the two endpoints."""


class BudgetExceeded(QLGError):
    """Brute-force enumeration was requested beyond its size cap."""


class NoRoot(QLGError):
    """A root finder found no sign change in its search interval."""


class BadAxis(QLGError):
    """A rotation axis is not a unit vector."""


class ConstraintViolated(QLGError):
    """A gate generator fails its defining polynomial identity."""


class ConfigError(QLGError):
    """A run configuration is invalid."""
