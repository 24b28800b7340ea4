"""Constructive equilibrium solvers.

Three solvers cover the regimes of the LLR cost model:

* ``solve_pooling`` (triple crossing): the admissible pooling outcomes form a
  q-interval along the lower tangency locus, bounded above by the receiver's
  obedience constraint at the common prior and below by the lowest type's
  participation constraint and by robustness to large deviations.
* ``solve_separating`` (single crossing): a forward recursion where each type
  maximizes along her own obedience ray subject to not tempting the adjacent
  lower type.
* ``solve_uninformative`` (triple crossing): locates the unique interior
  experiment giving every prior zero payoff; an all-uninformative outcome
  survives the D1 criterion iff the lowest type has a zero payoff guarantee
  and the top prior does not exceed the cap implied by that experiment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._roots import bisect_root, golden_max, scan_bracket
from .benchmark import solve_benchmark
from .costs import sender_payoff
from .crossing import CrossingReport, classify_crossing, tangency_low
from .errors import NoIntersectionError, RegimeError
from .game import (Blackwell, Experiment, GameConfig, LlrCost, UNINFORMATIVE,
                   blackwell_compare, odds_ratio, odds_ratio_inv)

_P_LO = 1e-10
_P_HI = 1.0 - 1e-10
_XTOL = 1e-12


def _require_llr(cfg: GameConfig) -> LlrCost:
    if not isinstance(cfg.cost, LlrCost):
        raise ValueError("equilibrium solvers support the LLR cost model only")
    return cfg.cost


def _require_triple(cfg: GameConfig) -> CrossingReport:
    model = _require_llr(cfg)
    report = classify_crossing(model.cost_good, model.cost_bad)
    if not report.triple:
        raise RegimeError(
            f"triple-crossing solver called with cost_good={model.cost_good} "
            f"<= bound={report.bound}",
            cost_good=model.cost_good, bound=report.bound)
    return report


def _require_single(cfg: GameConfig) -> CrossingReport:
    model = _require_llr(cfg)
    report = classify_crossing(model.cost_good, model.cost_bad)
    if report.triple:
        raise RegimeError(
            f"single-crossing solver called with cost_good={model.cost_good} "
            f"> bound={report.bound}",
            cost_good=model.cost_good, bound=report.bound)
    return report


def _line_payoff(p: float, ratio: float, mu: float, cfg: GameConfig) -> float:
    return sender_payoff(Experiment(p, ratio * p), mu, cfg.cost)


# Payoffs along an obedience ray q = ratio * p dive like
# -cost_bad*(1-mu)*(1-ratio)*ln(1/(1-p)) as p -> 1, so the far intersection
# with an indifference level can sit closer to 1 than float spacing allows.
# Working in w = 1 - p (payoff below) and root-finding in u = -ln(w) keeps
# full relative precision arbitrarily close to the corner; beyond u = 700 the
# payoff equals its linear asymptote A - B*u to within e^-700 * u.

_U_MAX = 700.0


def _line_payoff_w(w: float, ratio: float, mu: float, model: LlrCost) -> float:
    """f((1-w, ratio*(1-w)), mu) for the LLR model, accurate for tiny w."""
    one_minus_q = 1.0 - ratio + ratio * w
    gross = (mu + (1.0 - mu) * ratio) * (1.0 - w)
    kl_pq = -(1.0 - w) * math.log(ratio) + w * math.log(w / one_minus_q)
    kl_qp = (ratio * (1.0 - w) * math.log(ratio)
             + one_minus_q * math.log(one_minus_q / w))
    return gross - model.cost_good * mu * kl_pq - model.cost_bad * (1.0 - mu) * kl_qp


def _line_asymptote(ratio: float, mu: float, model: LlrCost) -> tuple[float, float]:
    """(A, B) with f(w = e^-u) = A - B*u + O(u e^-u) along the ray."""
    a = (mu + (1.0 - mu) * ratio
         + model.cost_good * mu * math.log(ratio)
         - model.cost_bad * (1.0 - mu) * (ratio * math.log(ratio)
                                          + (1.0 - ratio) * math.log(1.0 - ratio)))
    b = model.cost_bad * (1.0 - mu) * (1.0 - ratio)
    return a, b


def _line_level_u(ratio: float, mu: float, model: LlrCost, level: float) -> float:
    """u = -ln(1-p) at the far intersection of the ray payoff with `level`.

    Raises NoIntersectionError when the level exceeds the payoff everywhere
    on the ray.
    """
    gap = lambda u: _line_payoff_w(math.exp(-u), ratio, mu, model) - level
    u_peak, gap_peak = golden_max(gap, 1e-12, _U_MAX, xtol=1e-12)
    if gap_peak < 0.0:
        raise NoIntersectionError("indifference level never attained on the ray")
    gap_far = gap(_U_MAX)
    if gap_far < 0.0:
        return bisect_root(gap, u_peak, _U_MAX, xtol=_XTOL,
                           flo=gap_peak, fhi=gap_far)
    a, b = _line_asymptote(ratio, mu, model)
    return (a - level) / b


# -- Pooling (triple crossing) -------------------------------------------------

@dataclass(frozen=True)
class PoolingSet:
    """Admissible pooling q-interval along the lower tangency locus.

    ``q_lo = max(participation_bound, large_dev_bound)``,
    ``q_hi = obedience_bound``; the set is empty when q_lo > q_hi.
    """

    q_lo: float
    q_hi: float
    obedience_bound: float
    participation_bound: float
    large_dev_bound: float
    report: CrossingReport

    @property
    def is_empty(self) -> bool:
        return self.q_lo > self.q_hi

    def experiment_at(self, q: float) -> Experiment:
        """Locus experiment for a given q (no interval membership check)."""
        return Experiment(tangency_low(q, self.report), q)


def _second_crossing_u(mu: float, q: float, cfg: GameConfig,
                       report: CrossingReport) -> float:
    p_locus = tangency_low(q, report)
    ratio_top = odds_ratio(cfg.mus[-1], cfg.beta_bar)
    if q / p_locus > ratio_top:
        raise ValueError(f"locus point at q={q} is not persuasive at the top prior")
    level = sender_payoff(Experiment(p_locus, q), mu, cfg.cost)
    return _line_level_u(ratio_top, mu, cfg.cost, level)


def second_crossing_p(mu: float, q: float, cfg: GameConfig, *,
                      report: CrossingReport | None = None) -> float:
    """Second intersection of an indifference curve with the top obedience line.

    The indifference curve of prior mu through the locus point (P(q), q)
    meets the line q' = odds_ratio(mu_N) * p' twice; this returns the larger
    intersection in p (which may round to 1.0 when the crossing sits closer
    to 1 than float spacing: compare crossings via large_deviation_bound
    instead of subtracting near-1 values). Raises NoIntersectionError when
    the level is never attained on the line, and ValueError when the locus
    point itself is not persuasive at the top prior.
    """
    if report is None:
        report = _require_triple(cfg)
    return -math.expm1(-_second_crossing_u(mu, q, cfg, report))


def large_deviation_bound(cfg: GameConfig, *,
                          report: CrossingReport | None = None,
                          scan_points: int = 41) -> float:
    """Smallest q making the pooling locus robust to large deviations.

    Robustness at q holds iff the far crossing is weakly decreasing in the
    prior; payoffs are affine in the prior, so the extreme types decide
    monotonicity for every pair, and the bound is the root of
    u(mu_N, q) - u(mu_1, q) in the log-distance u = -ln(1 - p) of the far
    crossing. Falls back to 0 when the gap is negative throughout the
    persuasive range (always robust) and to 1 when positive throughout.
    """
    if report is None:
        report = _require_triple(cfg)
    ratio_top = odds_ratio(cfg.mus[-1], cfg.beta_bar)
    if ratio_top <= report.t_upper:
        return 1.0
    q_dom = (ratio_top - report.t_upper) / (1.0 - report.t_upper)
    mu_lo, mu_hi = cfg.mus[0], cfg.mus[-1]

    def gap(q: float) -> float:
        return (_second_crossing_u(mu_hi, q, cfg, report)
                - _second_crossing_u(mu_lo, q, cfg, report))

    lo, hi = 1e-6 * q_dom, q_dom * (1.0 - 1e-9)
    found = scan_bracket(gap, lo, hi, scan_points)
    if found is None:
        return 0.0 if gap(hi) < 0.0 else 1.0
    a, b, fa, fb = found
    return bisect_root(gap, a, b, xtol=_XTOL, flo=fa, fhi=fb)


def solve_pooling(cfg: GameConfig) -> PoolingSet:
    """The full set of pooling outcomes surviving the D1 criterion."""
    report = _require_triple(cfg)
    t_up = report.t_upper
    ratio_pool = odds_ratio(cfg.mu0, cfg.beta_bar)
    # Obedience at the common prior: the locus ratio q/P(q) = q + t_up*(1-q)
    # is increasing in q, so the constraint is an upper bound.
    obedience = (ratio_pool - t_up) / (1.0 - t_up)

    guarantee = solve_benchmark(cfg.mus[0], cfg.mus[0], cfg).value
    if guarantee <= 0.0:
        participation = 0.0
    else:
        def short(q: float) -> float:
            return (sender_payoff(Experiment(tangency_low(q, report), q),
                                  cfg.mus[0], cfg.cost) - guarantee)
        participation = bisect_root(short, 1e-12, 1.0 - 1e-9, xtol=_XTOL)

    large_dev = large_deviation_bound(cfg, report=report)
    q_lo = max(participation, large_dev)
    return PoolingSet(q_lo=q_lo, q_hi=obedience, obedience_bound=obedience,
                      participation_bound=participation,
                      large_dev_bound=large_dev, report=report)


# -- Separating (single crossing) ----------------------------------------------

@dataclass(frozen=True)
class SeparatingOutcome:
    """Per-type assignment of the unique D1 outcome under single crossing."""

    experiments: tuple[Experiment, ...]
    payoffs: tuple[float, ...]
    guarantees: tuple[float, ...]
    binding: tuple[bool, ...]

    @property
    def uninformative_types(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.experiments) if e.uninformative)


def solve_separating(cfg: GameConfig) -> SeparatingOutcome:
    """Forward recursion over types ordered by prior.

    Types whose own-prior benchmark value is zero stay uninformative with
    zero payoff. The lowest informative behavior is the own-prior benchmark;
    each later type takes her benchmark experiment if it does not tempt the
    adjacent lower type, and otherwise distorts upward to the larger root of
    the binding mimicry constraint on her obedience ray.
    """
    report = _require_single(cfg)
    experiments: list[Experiment] = []
    payoffs: list[float] = []
    guarantees: list[float] = []
    binding: list[bool] = []

    for i, mu in enumerate(cfg.mus):
        own = solve_benchmark(mu, mu, cfg)
        guarantees.append(own.value)
        if not own.informative:
            experiments.append(UNINFORMATIVE)
            payoffs.append(0.0)
            binding.append(False)
            continue
        ratio = odds_ratio(mu, cfg.beta_bar)
        if i == 0:
            experiments.append(own.experiment)
            payoffs.append(own.value)
            binding.append(False)
            continue
        prev_payoff = payoffs[i - 1]
        mu_prev = cfg.mus[i - 1]
        if _line_payoff(own.p_opt, ratio, mu_prev, cfg) <= prev_payoff:
            experiments.append(own.experiment)
            payoffs.append(own.value)
            binding.append(False)
            continue
        # Distort upward to the larger root of the binding mimicry constraint.
        u_star = _line_level_u(ratio, mu_prev, cfg.cost, prev_payoff)
        p_star = -math.expm1(-u_star)
        if p_star >= 1.0:
            # Vanishing-cost regime: the root sits closer to 1 than float
            # spacing (1 - p = e^-u_star). Store the limit point (1, ratio)
            # and the payoff from the exact ray asymptote.
            a, b = _line_asymptote(ratio, mu, cfg.cost)
            experiments.append(Experiment(1.0, ratio))
            payoffs.append(a - b * u_star)
        else:
            experiments.append(Experiment(p_star, ratio * p_star))
            payoffs.append(_line_payoff(p_star, ratio, mu, cfg))
        binding.append(True)

    return SeparatingOutcome(tuple(experiments), tuple(payoffs),
                             tuple(guarantees), tuple(binding))


# -- Uninformative outcome (triple crossing) -------------------------------------

def zero_payoff_q_good(p: float, cost_good: float) -> float:
    """q at which an all-good-prior sender gets exactly zero from (p, q)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")

    def resid(q: float) -> float:
        return p - cost_good * (p * math.log(p / q)
                                - (1.0 - p) * math.log((1.0 - q) / (1.0 - p)))

    lo = 0.5 * p
    while resid(lo) > 0.0:
        lo *= 0.25
        if lo < 1e-300:
            raise RuntimeError("zero-payoff root underflow")
    return bisect_root(resid, lo, p, xtol=1e-15)


def zero_payoff_q_bad(p: float, cost_bad: float) -> float:
    """q at which an all-bad-prior sender gets exactly zero from (p, q)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")

    def resid(q: float) -> float:
        return q + cost_bad * (q * math.log(p / q)
                               - (1.0 - q) * math.log((1.0 - q) / (1.0 - p)))

    lo = min(1e-12, 0.5 * p)
    while resid(lo) > 0.0:
        lo *= 0.25
        if lo < 1e-300:
            raise RuntimeError("zero-payoff root underflow")
    return bisect_root(resid, lo, p, xtol=1e-15)


@dataclass(frozen=True)
class UninformativeReport:
    """Existence test for the all-uninformative D1 outcome.

    ``experiment`` is the unique interior experiment with zero payoff for
    every prior; ``prior_cap`` is the largest top prior compatible with D1
    survival (the belief at which that experiment is exactly persuasive).
    """

    exists: bool
    experiment: Experiment
    prior_cap: float
    guarantee_lo: float


def zero_payoff_experiment(cost_good: float, cost_bad: float) -> Experiment:
    """The unique interior experiment worth exactly zero to every prior.

    Payoffs are affine in the prior, so it is the crossing of the
    zero-payoff curves of the two degenerate priors.
    """
    def curve_gap(p: float) -> float:
        return (zero_payoff_q_good(p, cost_good)
                - zero_payoff_q_bad(p, cost_bad))

    found = scan_bracket(curve_gap, 1e-4, 1.0 - 1e-7, 257)
    if found is None:
        raise RuntimeError("zero-payoff curves do not cross on the scan range")
    a, b, fa, fb = found
    p_star = bisect_root(curve_gap, a, b, xtol=_XTOL, flo=fa, fhi=fb)
    return Experiment(p_star, zero_payoff_q_good(p_star, cost_good))


def solve_uninformative(cfg: GameConfig) -> UninformativeReport:
    _require_triple(cfg)
    model = cfg.cost
    pi_star = zero_payoff_experiment(model.cost_good, model.cost_bad)
    prior_cap = odds_ratio_inv(pi_star.q / pi_star.p, cfg.beta_bar)
    guarantee_lo = solve_benchmark(cfg.mus[0], cfg.mus[0], cfg).value
    exists = guarantee_lo == 0.0 and cfg.mus[-1] <= prior_cap
    return UninformativeReport(exists=exists, experiment=pi_star,
                               prior_cap=prior_cap, guarantee_lo=guarantee_lo)


# -- Blackwell comparison against the benchmark ---------------------------------

@dataclass(frozen=True)
class BlackwellEntry:
    label: str
    ordering: Blackwell
    equilibrium: Experiment
    reference: Experiment


def blackwell_report(outcome: PoolingSet | SeparatingOutcome,
                     cfg: GameConfig) -> tuple[BlackwellEntry, ...]:
    """Compare equilibrium experiments with the matching benchmark experiments.

    For a pooling set the top point (at the obedience bound) is compared with
    the common-prior benchmark; for a separating outcome each type's
    experiment is compared with her own-prior benchmark.
    """
    if isinstance(outcome, PoolingSet):
        if outcome.is_empty:
            return ()
        pooled = outcome.experiment_at(outcome.q_hi)
        reference = solve_benchmark(cfg.mu0, cfg.mu0, cfg).experiment
        return (BlackwellEntry("pool_top", blackwell_compare(pooled, reference),
                               pooled, reference),)
    if isinstance(outcome, SeparatingOutcome):
        entries = []
        for i, exp in enumerate(outcome.experiments):
            reference = solve_benchmark(cfg.mus[i], cfg.mus[i], cfg).experiment
            entries.append(BlackwellEntry(f"type_{i}",
                                          blackwell_compare(exp, reference),
                                          exp, reference))
        return tuple(entries)
    raise TypeError(f"unsupported outcome: {outcome!r}")
