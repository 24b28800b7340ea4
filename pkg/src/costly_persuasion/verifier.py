"""Brute-force verification of equilibrium conditions and the D1 criterion.

Given a per-type assignment of experiments, the verifier reconstructs the
receiver's behavior from sequential rationality (high action iff the
posterior reaches the threshold), computes on-path beliefs by Bayes' rule,
and then sweeps a uniform deviation grid over the experiment triangle
checking, for every type:

* obedience of the receiver at every on-path experiment,
* no profitable mimicry of another type's on-path experiment,
* no profitable deviation under D1-consistent off-path beliefs.

With binary receiver actions a deviation is worth f(pi, mu_theta) to a type
whenever the receiver's interim belief makes it persuasive and -cost
otherwise, so the belief sets supporting a deviation are upper intervals.
The D1-critical belief is therefore a type prior: the lowest type for which
the deviation is not strictly equilibrium dominated (all types below it are,
which is exactly the case where the criterion pins off-path beliefs). A
deviation breaks the profile when some type strictly gains at that belief.

Grids are uniform on [0, 1], so doubling the resolution (n -> 2n-1) keeps
every old node and previously found witnesses survive refinement. Boundary
deviations with infinite cost are excluded (they are exactly dominated), and
all p == q points collapse into the single canonical uninformative deviation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .costs import cost, cost_grid, sender_payoff
from .game import Experiment, GameConfig, UNINFORMATIVE, is_persuasive, posterior

_EQ_SLACK = 1e-9  # slack for "weakly profitable" screening


@dataclass(frozen=True)
class GridSpec:
    """Deviation-grid resolution and violation tolerance."""

    n_p: int = 201
    n_q: int = 201
    n_beta: int = 101
    tol: float = 1e-9

    def __post_init__(self):
        if min(self.n_p, self.n_q, self.n_beta) < 3:
            raise ValueError("grid resolutions must be at least 3")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class StrategyProfile:
    """Pure sender strategy: one experiment per type, ordered as cfg.types."""

    assignment: tuple[Experiment, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))


class OffPathRule(Enum):
    ASSIGN_LOWEST = "assign-lowest"
    D1_CRITICAL = "d1-critical"


@dataclass(frozen=True)
class BeliefSystem:
    """Receiver beliefs: optional explicit on-path beliefs plus off-path rule."""

    on_path: Mapping[Experiment, float] = field(default_factory=dict)
    off_path_rule: OffPathRule = OffPathRule.D1_CRITICAL


class ViolationKind(Enum):
    MIMICRY = "mimicry"
    OFF_PATH_DEVIATION = "off-path-deviation"
    D1_BELIEF = "d1-belief"
    OBEDIENCE = "obedience"
    BAYES_CONSISTENCY = "bayes-consistency"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    type_index: int
    experiment: Experiment
    belief: float
    margin: float


@dataclass(frozen=True)
class VerifierReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[ViolationKind]:
        return {v.kind for v in self.violations}


def on_path_beliefs(profile: StrategyProfile | Sequence[Experiment],
                    cfg: GameConfig) -> dict[Experiment, float]:
    """Bayes interim beliefs for each distinct on-path experiment."""
    exps = _assignment(profile)
    beliefs: dict[Experiment, float] = {}
    for pi in dict.fromkeys(exps):
        mass = math.fsum(cfg.probs[i] for i, e in enumerate(exps) if e == pi)
        good = math.fsum(cfg.probs[i] * cfg.mus[i]
                         for i, e in enumerate(exps) if e == pi)
        beliefs[pi] = good / mass
    return beliefs


def sender_value_given_belief(beta: float, pi: Experiment, theta: int,
                              cfg: GameConfig) -> float:
    """Type theta's expected payoff from pi when the interim belief is beta.

    Equals the persuasive payoff when the good outcome persuades, and the
    sunk cost otherwise; the uninformative experiment is worth exactly 0
    because the receiver is never persuaded at the interim stage.
    """
    if pi.uninformative:
        return 0.0
    mu = cfg.mus[theta]
    if is_persuasive(pi, beta, cfg.beta_bar):
        return sender_payoff(pi, mu, cfg.cost)
    c = cost(pi, mu, cfg.cost)
    return -c if c != math.inf else -math.inf


def equilibrium_payoffs(profile: StrategyProfile | Sequence[Experiment],
                        cfg: GameConfig) -> tuple[float, ...]:
    exps = _assignment(profile)
    beliefs = on_path_beliefs(exps, cfg)
    return tuple(sender_value_given_belief(beliefs[pi], pi, i, cfg)
                 for i, pi in enumerate(exps))


def belief_grid(cfg: GameConfig, n: int) -> np.ndarray:
    """Uniform belief grid on [mu_1, mu_N]."""
    return np.linspace(cfg.mus[0], cfg.mus[-1], n)


def deviation_sets(pi: Experiment, theta: int, v_star: float, cfg: GameConfig,
                   beliefs: np.ndarray, *, tol: float = _EQ_SLACK
                   ) -> tuple[np.ndarray, np.ndarray]:
    """Grid beliefs where deviating to pi strictly (weakly) beats v_star.

    Returns (strict, weak) arrays; weak membership is tested with tol slack,
    so strict is always a subset of weak.
    """
    beliefs = np.asarray(beliefs, dtype=float)
    if beliefs.ndim != 1 or len(beliefs) < 1 or np.any(np.diff(beliefs) <= 0.0):
        raise ValueError("belief grid must be one-dimensional and increasing")
    if pi.uninformative:
        values = np.zeros_like(beliefs)
    else:
        bounds = (beliefs / (1.0 - beliefs)) / (cfg.beta_bar / (1.0 - cfg.beta_bar))
        persuasive = pi.q <= pi.p * bounds
        payoff = sender_payoff(pi, cfg.mus[theta], cfg.cost)
        sunk = cost(pi, cfg.mus[theta], cfg.cost)
        values = np.where(persuasive, payoff, -sunk)
    strict = beliefs[values > v_star]
    weak = beliefs[values >= v_star - tol]
    return strict, weak


def _assignment(profile: StrategyProfile | Sequence[Experiment]) -> tuple[Experiment, ...]:
    if isinstance(profile, StrategyProfile):
        return profile.assignment
    return tuple(profile)


def _deviation_grid(cfg: GameConfig, grid: GridSpec,
                    on_path: Sequence[Experiment]) -> tuple[np.ndarray, np.ndarray]:
    p_axis = np.linspace(0.0, 1.0, grid.n_p)
    q_axis = np.linspace(0.0, 1.0, grid.n_q)
    pp, qq = np.meshgrid(p_axis, q_axis, indexing="ij")
    p = pp.ravel()
    q = qq.ravel()
    keep = (q < p) & (q > 0.0) & (p < 1.0)  # interior of the triangle only
    for e in on_path:
        keep &= ~((p == e.p) & (q == e.q))
    return p[keep], q[keep]


def verify_d1(profile: StrategyProfile | Sequence[Experiment], cfg: GameConfig,
              grid: GridSpec = GridSpec(),
              belief_system: BeliefSystem | None = None) -> VerifierReport:
    """Check equilibrium conditions and D1 robustness over a deviation grid.

    Every reported violation is re-evaluated at full scalar precision at its
    witness and carries the recomputed margin (> grid.tol).
    """
    exps = _assignment(profile)
    if len(exps) != cfg.n_types:
        raise ValueError(f"profile has {len(exps)} experiments for {cfg.n_types} types")
    rule = (belief_system.off_path_rule if belief_system is not None
            else OffPathRule.D1_CRITICAL)
    tol = grid.tol
    beliefs = on_path_beliefs(exps, cfg)
    v_star = tuple(sender_value_given_belief(beliefs[pi], pi, i, cfg)
                   for i, pi in enumerate(exps))
    violations: list[Violation] = []

    # Bayes consistency of supplied on-path beliefs.
    if belief_system is not None:
        for pi, stated in belief_system.on_path.items():
            if pi not in beliefs:
                continue
            gap = abs(stated - beliefs[pi])
            if gap > tol:
                theta = next(i for i, e in enumerate(exps) if e == pi)
                violations.append(Violation(ViolationKind.BAYES_CONSISTENCY,
                                            theta, pi, stated, gap))

    # Receiver obedience at informative on-path experiments.
    for pi, beta in beliefs.items():
        if pi.uninformative:
            continue
        post = posterior(beta, pi, "g")
        if post < cfg.beta_bar - tol:
            for i, e in enumerate(exps):
                if e == pi:
                    violations.append(Violation(ViolationKind.OBEDIENCE, i, pi,
                                                beta, cfg.beta_bar - post))

    # Mimicry across assigned experiments.
    for i in range(cfg.n_types):
        for j in range(cfg.n_types):
            if exps[j] == exps[i]:
                continue
            gain = sender_value_given_belief(beliefs[exps[j]], exps[j], i, cfg) - v_star[i]
            if gain > tol:
                violations.append(Violation(ViolationKind.MIMICRY, i, exps[j],
                                            beliefs[exps[j]], gain))

    # The canonical uninformative deviation guarantees zero.
    for i in range(cfg.n_types):
        if exps[i] != UNINFORMATIVE and 0.0 > v_star[i] + tol:
            violations.append(Violation(ViolationKind.OFF_PATH_DEVIATION, i,
                                        UNINFORMATIVE, cfg.mus[0], -v_star[i]))

    violations.extend(_grid_violations(exps, cfg, grid, v_star, rule))

    # Soundness: recompute each grid witness at scalar precision.
    certified = []
    for v in violations:
        if v.kind in (ViolationKind.OFF_PATH_DEVIATION, ViolationKind.D1_BELIEF):
            margin = (sender_value_given_belief(v.belief, v.experiment,
                                                v.type_index, cfg)
                      - v_star[v.type_index])
            if margin <= tol:
                continue
            v = Violation(v.kind, v.type_index, v.experiment, v.belief, margin)
        certified.append(v)
    return VerifierReport(tuple(certified))


def _grid_violations(exps: tuple[Experiment, ...], cfg: GameConfig,
                     grid: GridSpec, v_star: tuple[float, ...],
                     rule: OffPathRule) -> list[Violation]:
    p, q = _deviation_grid(cfg, grid, exps)
    if len(p) == 0:
        return []
    n_types = cfg.n_types
    mus = np.asarray(cfg.mus)
    payoff = np.empty((n_types, len(p)))
    for i in range(n_types):
        payoff[i] = (mus[i] * p + (1.0 - mus[i]) * q
                     - cost_grid(p, q, float(mus[i]), cfg.cost))

    # Persuasiveness of each deviation at each type prior (ties persuade).
    persuasive = np.empty((n_types, len(p)), dtype=bool)
    for i in range(n_types):
        bound = (mus[i] / (1.0 - mus[i])) / (cfg.beta_bar / (1.0 - cfg.beta_bar))
        persuasive[i] = q <= p * bound

    vs = np.asarray(v_star)[:, None]
    # Best achievable value over permissible beliefs: persuasive at the top
    # prior or not at all. -cost = payoff - gross payoff.
    sunk = payoff - (mus[:, None] * p + (1.0 - mus[:, None]) * q)
    best = np.where(persuasive[-1], payoff, sunk)
    non_dominated = best >= vs - _EQ_SLACK
    candidate = non_dominated.any(axis=0)
    if not candidate.any():
        return []

    if rule is OffPathRule.ASSIGN_LOWEST:
        critical = np.zeros(len(p), dtype=np.int64)
    else:
        critical = np.argmax(non_dominated, axis=0)  # lowest non-dominated type
    belief_at = mus[critical]
    persuasive_at_critical = np.take_along_axis(persuasive, critical[None, :],
                                                axis=0)[0]
    value_at = np.where(persuasive_at_critical, payoff, sunk)
    gain = value_at - vs
    viol = candidate & (gain > grid.tol)

    out: list[Violation] = []
    points, types = np.nonzero(viol.T)  # row-major in grid points, then type
    for pt, ty in zip(points.tolist(), types.tolist()):
        kind = (ViolationKind.OFF_PATH_DEVIATION if critical[pt] == 0
                else ViolationKind.D1_BELIEF)
        out.append(Violation(kind, ty, Experiment(p[pt], q[pt]),
                             float(belief_at[pt]), float(gain[ty, pt])))
    return out
