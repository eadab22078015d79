"""Exception hierarchy; CLI exit codes hang off these."""

from __future__ import annotations

__all__ = [
    "CubicbifError",
    "ConfigError",
    "HypothesisError",
    "ConvergenceError",
    "BracketError",
    "BudgetExceededError",
    "EscapeError",
    "NumericsError",
]


class CubicbifError(Exception):
    """Base class for toolkit errors."""


class ConfigError(CubicbifError):
    """Malformed experiment configuration (exit code 2)."""


class BracketError(CubicbifError):
    """Predicate/outcome does not differ at the bracket endpoints (exit code 3)."""


class BudgetExceededError(CubicbifError):
    """Bisection iteration budget exhausted before target width (exit code 3)."""


class NumericsError(CubicbifError):
    """Invalid numerical parameter or non-finite input (exit code 4)."""


class HypothesisError(CubicbifError):
    """Coefficient hypotheses (c > 0, a < 0) violated; branch location refused."""

    def __init__(self, message: str, failed_flags: tuple[str, ...] = ()):
        super().__init__(message)
        self.failed_flags = failed_flags


class ConvergenceError(CubicbifError):
    """Two-start agreement failed (convergence-not-reached).

    Carries the observed disagreement so callers near a bifurcation can fall
    back to separation-based classification.
    """

    def __init__(self, message: str, disagreement: float = float("nan"), separation: float = float("nan")):
        super().__init__(message)
        self.disagreement = disagreement
        self.separation = separation


class EscapeError(CubicbifError):
    """A run escaped where coercivity forbids it (internal error, exit code 4)."""
