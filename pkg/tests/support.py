"""Shared samplers and independent oracles for the test suite.

The oracles here deliberately avoid the code paths they check: the MRS
oracle differentiates the payoff by central differences, the benchmark
oracle is a dense grid search, and config samplers construct instances
from the geometry (obedience window around the zero-payoff experiment)
with rejection so that every solver-facing quantity is well-conditioned.
"""

from __future__ import annotations

import math

import numpy as np

from costly_persuasion import (Experiment, GameConfig, LlrCost, SenderType,
                               classify_crossing, feasibility, odds_ratio,
                               odds_ratio_inv, sender_payoff,
                               single_crossing_bound, solve_pooling,
                               zero_payoff_experiment)


def payoff_fd_mrs(p: float, q: float, mu: float, model, h: float = 1e-6) -> float:
    """-(df/dp)/(df/dq) by central differences on the payoff itself."""
    f = lambda pp, qq: sender_payoff(Experiment(pp, qq), mu, model)
    dfp = (f(p + h, q) - f(p - h, q)) / (2.0 * h)
    dfq = (f(p, q + h) - f(p, q - h)) / (2.0 * h)
    return -dfp / dfq


def mrs_mu_fd(p: float, q: float, mu: float, model, h: float = 1e-6) -> float:
    """Central difference of the MRS in the prior, on the payoff-based MRS."""
    return (payoff_fd_mrs(p, q, mu + h, model) -
            payoff_fd_mrs(p, q, mu - h, model)) / (2.0 * h)


def benchmark_grid_value(mu: float, beta: float, cfg: GameConfig,
                         n: int = 100_000) -> float:
    """Dense grid search for the best payoff along the obedience ray."""
    ratio = odds_ratio(beta, cfg.beta_bar)
    p = np.linspace(1e-9, 1.0 - 1e-9, n)
    q = ratio * p
    model = cfg.cost
    kl_pq = p * np.log(p / q) + (1.0 - p) * np.log((1.0 - p) / (1.0 - q))
    kl_qp = q * np.log(q / p) + (1.0 - q) * np.log((1.0 - q) / (1.0 - p))
    values = (mu * p + (1.0 - mu) * q
              - model.cost_good * mu * kl_pq
              - model.cost_bad * (1.0 - mu) * kl_qp)
    return max(float(values.max()), 0.0)


def draw_interior_experiment(rng: np.random.Generator,
                             margin: float = 0.05,
                             min_gap: float = 0.02) -> tuple[float, float]:
    while True:
        q = rng.uniform(margin, 1.0 - margin - min_gap)
        p = rng.uniform(q + min_gap, 1.0 - margin)
        if p - q >= min_gap:
            return p, q


def draw_llr(rng: np.random.Generator, lo: float = 0.1, hi: float = 10.0) -> LlrCost:
    span = math.log(hi / lo)
    return LlrCost(lo * math.exp(rng.uniform(0.0, span)),
                   lo * math.exp(rng.uniform(0.0, span)))


def obedience_window(cost_good: float, cost_bad: float,
                     beta_bar: float) -> tuple[float, float]:
    """Prior interval (floor, cap): pooling needs the common prior above the
    floor, and the all-uninformative outcome survives up to the cap."""
    report = classify_crossing(cost_good, cost_bad)
    pi_star = zero_payoff_experiment(cost_good, cost_bad)
    floor = odds_ratio_inv(report.t_upper, beta_bar)
    cap = odds_ratio_inv(pi_star.q / pi_star.p, beta_bar)
    return floor, cap


def _window_types(rng: np.random.Generator, n_types: int, floor: float,
                  cap: float, beta_bar: float, mu_top: float
                  ) -> tuple[SenderType, ...] | None:
    # Low types sit well below the window (zero payoff guarantee); the top
    # type carries enough mass to pull the common prior above the floor.
    lows = np.sort(rng.uniform(0.15, 0.8 * floor, size=n_types - 1))
    if n_types > 2 and np.min(np.diff(lows)) < 0.01:
        return None
    if mu_top - lows[-1] < 0.02:
        return None
    mean_low = float(np.mean(lows))
    weight_cap = (mu_top - floor) / (mu_top - mean_low)
    if weight_cap <= 0.02:
        return None
    low_total = rng.uniform(0.25, 0.75) * min(weight_cap, 1.0)
    shares = rng.dirichlet(np.ones(n_types - 1)) * low_total
    types = [SenderType(float(m), float(s)) for m, s in zip(lows, shares)]
    types.append(SenderType(float(mu_top), float(1.0 - low_total)))
    return tuple(types)


def sample_triple_config(rng: np.random.Generator, *, n_types: int | None = None,
                         interior_large_dev: bool = False,
                         min_width: float = 0.02) -> tuple[GameConfig, "PoolingSet"]:
    """A triple-crossing instance with a nonempty, well-separated pooling set.

    With ``interior_large_dev`` the top prior is pushed above the
    uninformative cap so the lower bound of the pooling interval comes from
    robustness to large deviations (and is bounded away from zero).
    """
    while True:
        cost_bad = float(10.0 ** rng.uniform(-0.35, 0.45))
        mult = float(rng.uniform(1.25, 2.1))
        cost_good = single_crossing_bound(cost_bad) * mult
        beta_bar = float(rng.uniform(0.55, 0.8))
        floor, cap = obedience_window(cost_good, cost_bad, beta_bar)
        width = cap - floor
        if width < 0.008 or cap >= beta_bar - 0.02:
            continue
        n = int(n_types if n_types is not None else rng.integers(2, 5))
        if interior_large_dev:
            mu_top = cap + float(rng.uniform(0.2, 0.5)) * width
        else:
            mu_top = cap - float(rng.uniform(0.15, 0.6)) * width
        types = _window_types(rng, n, floor, cap, beta_bar, mu_top)
        if types is None:
            continue
        cfg = GameConfig(LlrCost(cost_good, cost_bad), beta_bar, types)
        if cfg.mu0 <= floor + 0.05 * width:
            continue
        if feasibility(cost_good, cost_bad, types[0].mu, types[0].mu, beta_bar) > 0.0:
            continue  # want a zero guarantee for the lowest type
        try:
            pooling = solve_pooling(cfg)
        except Exception:
            continue
        if pooling.is_empty or pooling.q_hi - pooling.q_lo < min_width:
            continue
        if pooling.q_hi > 0.9:
            continue
        if interior_large_dev and not (0.04 <= pooling.large_dev_bound
                                       <= pooling.q_hi - min_width):
            continue
        return cfg, pooling


def sample_single_config(rng: np.random.Generator, *, n_types: int | None = None,
                         all_informative: bool = False) -> GameConfig:
    """A single-crossing instance; the top type always persuades."""
    while True:
        cost_bad = float(10.0 ** rng.uniform(-0.3, 0.4))
        mult = float(rng.uniform(0.25, 0.98))
        cost_good = single_crossing_bound(cost_bad) * mult
        beta_bar = float(rng.uniform(0.55, 0.85))
        n = int(n_types if n_types is not None else rng.integers(2, 5))
        mus = np.sort(rng.uniform(0.1, beta_bar - 0.05, size=n))
        if n > 1 and np.min(np.diff(mus)) < 0.04:
            continue
        shares = rng.dirichlet(np.ones(n))
        if np.min(shares) < 0.05:
            continue
        types = tuple(SenderType(float(m), float(s)) for m, s in zip(mus, shares))
        cfg = GameConfig(LlrCost(cost_good, cost_bad), beta_bar, types)
        feas = [feasibility(cost_good, cost_bad, m, m, beta_bar) for m in cfg.mus]
        if feas[-1] <= 0.05:
            continue  # top type should persuade with some room
        if all_informative and min(feas) <= 0.05:
            continue
        return cfg


def sample_uninformative_config(rng: np.random.Generator, *, exists: bool
                                ) -> GameConfig:
    """A triple-crossing instance around the uninformative-outcome cap.

    ``exists=True`` places the top prior below the cap (the all-uninformative
    profile survives); otherwise above it with a margin so the breaking
    deviation is resolvable on the default verifier grid.
    """
    while True:
        cost_bad = float(10.0 ** rng.uniform(-0.3, 0.4))
        mult = float(rng.uniform(1.3, 2.0))
        cost_good = single_crossing_bound(cost_bad) * mult
        beta_bar = float(rng.uniform(0.6, 0.8))
        floor, cap = obedience_window(cost_good, cost_bad, beta_bar)
        if exists:
            mu_top = cap - rng.uniform(0.1, 0.5) * (cap - floor)
        else:
            if cap >= beta_bar - 0.06:
                continue
            mu_top = cap + rng.uniform(0.035, min(0.09, beta_bar - 0.02 - cap))
        mu_lo = float(rng.uniform(0.15, 0.6 * floor))
        if mu_top - mu_lo < 0.05:
            continue
        share_lo = float(rng.uniform(0.05, 0.3))
        cfg = GameConfig(LlrCost(cost_good, cost_bad), beta_bar,
                         (SenderType(mu_lo, share_lo),
                          SenderType(float(mu_top), 1.0 - share_lo)))
        if feasibility(cost_good, cost_bad, mu_lo, mu_lo, beta_bar) > 0.0:
            continue
        return cfg
