"""Symmetric-information benchmark: the best persuasive experiment and its value.

With no private information, a sender holding prior mu facing a receiver at
interim belief beta maximizes f over experiments persuasive at beta. The
payoff is increasing in q, so the optimum lies on the obedience line
q = odds_ratio(beta) * p, and the problem is a concave one-dimensional
maximization in p. Under the LLR model the derivative along the line splits
into per-state slope components whose limit at p -> 0 gives a closed-form
feasibility test: an informative optimum exists iff feasibility(...) > 0,
otherwise the optimum is the uninformative experiment with value 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._roots import bisect_root, golden_max
from .costs import sender_payoff
from .crossing import crossing_discriminant, experiment_odds
from .game import (Experiment, GameConfig, LlrCost, ShannonCost, UNINFORMATIVE,
                   odds_ratio)

_P_LO = 1e-10
_P_HI = 1.0 - 1e-10
_FOC_XTOL = 1e-10


@dataclass(frozen=True)
class SlopeComponents:
    """Per-state pieces of two payoff derivatives at an interior experiment.

    ``ray_good`` / ``ray_bad`` weight mu and (1-mu) in d/dp f((p, Qp), mu)
    along an obedience ray with Q = q/p held fixed; ``locus_good`` /
    ``locus_bad`` weight them in d/dq f((P(q), q), mu) along the lower
    tangency locus P. They satisfy

        ray_bad*locus_good - ray_good*locus_bad
            = discriminant * (p - q) / (1 - q),

    so both derivatives pivot with mu exactly on the tangency loci.
    """

    ray_good: float
    ray_bad: float
    locus_good: float
    locus_bad: float


def slope_components(p: float, q: float, cost_good: float, cost_bad: float) -> SlopeComponents:
    if not (0.0 < q < p < 1.0):
        raise ValueError(f"slope components need an interior experiment, got ({p}, {q})")
    log_lr = math.log(p * (1.0 - q) / ((1.0 - p) * q))
    ray_good = 1.0 + cost_good * ((p - q) / (p * (1.0 - q)) - log_lr)
    ray_bad = (q / p) * (1.0 - cost_bad * ((p - q) / ((1.0 - p) * q) - log_lr))
    locus_good = (p * (1.0 - p)) / (q * (1.0 - q)) * (
        1.0 + cost_good * ((p - q) / (p * (1.0 - p)) - log_lr))
    locus_bad = 1.0 - cost_bad * ((p - q) / (q * (1.0 - q)) - log_lr)
    return SlopeComponents(ray_good, ray_bad, locus_good, locus_bad)


def slope_pivot_identity_gap(p: float, q: float, cost_good: float, cost_bad: float) -> float:
    """Residual of the pivot identity at (p, q); zero up to rounding."""
    c = slope_components(p, q, cost_good, cost_bad)
    disc = float(crossing_discriminant(experiment_odds(p, q), cost_good, cost_bad))
    return (c.ray_bad * c.locus_good - c.ray_good * c.locus_bad
            - disc * (p - q) / (1.0 - q))


def feasibility(cost_good: float, cost_bad: float, mu: float, beta: float,
                beta_bar: float) -> float:
    """Limit of the obedience-line payoff slope at p -> 0 (LLR model).

    Positive exactly when an informative persuasive experiment beats the
    uninformative one, i.e. when the benchmark value is positive.
    """
    q_ratio = odds_ratio(beta, beta_bar)
    log_q = math.log(q_ratio)
    return (mu + (1.0 - mu) * q_ratio
            + mu * cost_good * (log_q + 1.0 - q_ratio)
            - (1.0 - mu) * cost_bad * (q_ratio * log_q + 1.0 - q_ratio))


@dataclass(frozen=True)
class BenchmarkSolution:
    """Optimal experiment and value; uninformative with value 0 when infeasible."""

    experiment: Experiment
    value: float
    p_opt: float | None

    @property
    def informative(self) -> bool:
        return not self.experiment.uninformative


def line_payoff_slope(p: float, q_ratio: float, mu: float, model: LlrCost) -> float:
    """d/dp of f((p, q_ratio * p), mu) for the LLR model."""
    c = slope_components(p, q_ratio * p, model.cost_good, model.cost_bad)
    return mu * c.ray_good + (1.0 - mu) * c.ray_bad


def solve_benchmark(mu: float, beta: float, cfg: GameConfig) -> BenchmarkSolution:
    """Best experiment persuasive at belief beta for a sender with prior mu."""
    q_ratio = odds_ratio(beta, cfg.beta_bar)
    model = cfg.cost

    def value_at(p: float) -> float:
        return sender_payoff(Experiment(p, q_ratio * p), mu, model)

    if isinstance(model, LlrCost):
        feas = feasibility(model.cost_good, model.cost_bad, mu, beta, cfg.beta_bar)
        if feas <= 0.0:
            return BenchmarkSolution(UNINFORMATIVE, 0.0, None)
        slope = lambda p: line_payoff_slope(p, q_ratio, mu, model)
        s_lo, s_hi = slope(_P_LO), slope(_P_HI)
        if (s_lo > 0.0) != (s_hi > 0.0):
            p_opt = bisect_root(slope, _P_LO, _P_HI, xtol=_FOC_XTOL,
                                flo=s_lo, fhi=s_hi)
        else:
            p_opt, _ = golden_max(value_at, _P_LO, _P_HI, xtol=_FOC_XTOL)
        value = value_at(p_opt)
        if value <= 0.0:
            return BenchmarkSolution(UNINFORMATIVE, 0.0, None)
        return BenchmarkSolution(Experiment(p_opt, q_ratio * p_opt), value, p_opt)

    if isinstance(model, ShannonCost):
        p_opt, value = golden_max(value_at, _P_LO, _P_HI, xtol=_FOC_XTOL)
        if value <= 0.0:
            return BenchmarkSolution(UNINFORMATIVE, 0.0, None)
        return BenchmarkSolution(Experiment(p_opt, q_ratio * p_opt), value, p_opt)

    raise TypeError(f"unknown cost model: {model!r}")
