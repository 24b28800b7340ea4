"""Shared exception types."""

from __future__ import annotations


class ConfigError(ValueError):
    """Invalid game configuration. Carries the complete list of violations."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class RegimeError(ValueError):
    """A solver was called outside its crossing regime.

    Carries the classification data so callers can report the supplied
    good-news cost against the computed boundary.
    """

    def __init__(self, message: str, *, cost_good: float | None = None,
                 bound: float | None = None):
        super().__init__(message)
        self.cost_good = cost_good
        self.bound = bound


class BracketError(ValueError):
    """A root bracket does not enclose a sign change."""


class NoIntersectionError(RuntimeError):
    """An indifference level is never attained on the target line."""


class UndefinedPosteriorError(ValueError):
    """Bayes update conditioned on a zero-probability outcome."""
