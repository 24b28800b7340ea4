"""Core domain objects: experiments, cost models, game configurations, beliefs.

An experiment is a binary signal about a binary state, identified with the
pair (p, q) of good-outcome probabilities conditional on the good and bad
state. Every p == q experiment carries no information and costs nothing, so
the whole family is stored as one canonical object with p = q = 0.

The receiver takes the high action iff his posterior on the good state
reaches the threshold ``beta_bar``; ties resolve to the high action, and all
persuasiveness tests are plain ``>=`` comparisons with no epsilon slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Literal, Mapping, Sequence, Union

from .errors import ConfigError, UndefinedPosteriorError

Outcome = Literal["g", "b"]

_LAMBDA_TOL = 1e-12
_BELIEF_TOL = 1e-12


@dataclass(frozen=True)
class Experiment:
    """A binary experiment (p, q) with 0 <= q <= p <= 1.

    ``uninformative`` is derived: true exactly when the constructor was given
    p == q, in which case the canonical representative (0, 0) is stored.
    """

    p: float
    q: float
    uninformative: bool = field(init=False, default=False)

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (math.isfinite(p) and math.isfinite(q)):
            raise ValueError(f"experiment probabilities must be finite, got ({p}, {q})")
        if not 0.0 <= q <= p <= 1.0:
            raise ValueError(f"experiment requires 0 <= q <= p <= 1, got p={p}, q={q}")
        if p == q:
            object.__setattr__(self, "p", 0.0)
            object.__setattr__(self, "q", 0.0)
            object.__setattr__(self, "uninformative", True)
        else:
            object.__setattr__(self, "p", p)
            object.__setattr__(self, "q", q)

    @property
    def interior(self) -> bool:
        """True when 0 < q < p < 1."""
        return 0.0 < self.q < self.p < 1.0

    @property
    def reveals_state(self) -> bool:
        """True for experiments with an outcome that pins the state down."""
        return not self.uninformative and (self.q == 0.0 or self.p == 1.0)


UNINFORMATIVE = Experiment(0.0, 0.0)


@dataclass(frozen=True)
class LlrCost:
    """Log-likelihood-ratio cost with separate good-news and bad-news weights."""

    cost_good: float
    cost_bad: float

    def __post_init__(self):
        for name in ("cost_good", "cost_bad"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {v}")


@dataclass(frozen=True)
class ShannonCost:
    """Entropy-reduction cost with a single positive scale."""

    scale: float

    def __post_init__(self):
        if not (math.isfinite(self.scale) and self.scale > 0.0):
            raise ValueError(f"scale must be positive and finite, got {self.scale}")


CostModel = Union[LlrCost, ShannonCost]


@dataclass(frozen=True)
class SenderType:
    """One sender type: prior on the good state and marginal probability."""

    mu: float
    prob: float


@dataclass(frozen=True)
class GameConfig:
    """A full game instance: cost model, receiver threshold, ordered types.

    Invariants (rejected otherwise): strictly increasing interior priors,
    positive type probabilities summing to one, and mu_N < beta_bar so the
    receiver is never persuaded at the interim stage.
    """

    cost: CostModel
    beta_bar: float
    types: tuple[SenderType, ...]

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(self.types))
        errors = _config_violations(self.cost, self.beta_bar, self.types)
        if errors:
            raise ConfigError(errors)

    @property
    def mu0(self) -> float:
        """Common prior: probability-weighted average of type priors."""
        return math.fsum(t.prob * t.mu for t in self.types)

    @property
    def mus(self) -> tuple[float, ...]:
        return tuple(t.mu for t in self.types)

    @property
    def probs(self) -> tuple[float, ...]:
        return tuple(t.prob for t in self.types)

    @property
    def n_types(self) -> int:
        return len(self.types)


def _config_violations(cost, beta_bar, types: Sequence[SenderType]) -> list[str]:
    errors: list[str] = []
    if not isinstance(cost, (LlrCost, ShannonCost)):
        errors.append("cost: must be an LlrCost or ShannonCost")
    if not (isinstance(beta_bar, (int, float)) and math.isfinite(beta_bar)
            and 0.0 < beta_bar < 1.0):
        errors.append(f"beta_bar: must lie in (0, 1), got {beta_bar}")
    if len(types) == 0:
        errors.append("types: at least one sender type required")
        return errors
    mus = [t.mu for t in types]
    probs = [t.prob for t in types]
    for i, m in enumerate(mus):
        if not (isinstance(m, (int, float)) and math.isfinite(m) and 0.0 < m < 1.0):
            errors.append(f"types[{i}].mu: must lie in (0, 1), got {m}")
    for i, w in enumerate(probs):
        if not (isinstance(w, (int, float)) and math.isfinite(w) and 0.0 < w <= 1.0):
            errors.append(f"types[{i}].prob: must lie in (0, 1], got {w}")
    if any(b <= a for a, b in zip(mus, mus[1:])):
        errors.append("types: priors must be strictly increasing")
    if abs(math.fsum(probs) - 1.0) > _LAMBDA_TOL:
        errors.append(f"types: probabilities must sum to 1, got {math.fsum(probs)!r}")
    if (isinstance(beta_bar, (int, float)) and 0.0 < beta_bar < 1.0
            and all(0.0 < m < 1.0 for m in mus) and mus[-1] >= beta_bar):
        errors.append("types: mu_N must be below beta_bar (interim persuasion is out of scope)")
    return errors


def validate_config(raw: Mapping) -> GameConfig:
    """Build a GameConfig from a plain mapping, aggregating every violation.

    Expected shape::

        {"cost": {"model": "llr", "C_g": 5.0, "C_b": 1.0},   # or "shannon" with "C"
         "beta_bar": 0.7,
         "types": [{"mu": 0.2, "prob": 0.5}, {"mu": 0.4, "prob": 0.5}]}

    Raises ConfigError carrying the complete list of problems.
    """
    errors: list[str] = []
    if not isinstance(raw, Mapping):
        raise ConfigError(["config: expected a mapping"])

    cost = None
    cost_raw = raw.get("cost")
    if cost_raw is None:
        errors.append("missing field cost")
    elif not isinstance(cost_raw, Mapping):
        errors.append("cost: expected a mapping with a 'model' field")
    else:
        model = cost_raw.get("model")
        if model == "llr":
            cg, cb = cost_raw.get("C_g"), cost_raw.get("C_b")
            if cg is None:
                errors.append("cost.C_g: missing for model 'llr'")
            if cb is None:
                errors.append("cost.C_b: missing for model 'llr'")
            if cg is not None and cb is not None:
                try:
                    cost = LlrCost(float(cg), float(cb))
                except (TypeError, ValueError) as exc:
                    errors.append(f"cost: {exc}")
        elif model == "shannon":
            c = cost_raw.get("C")
            if c is None:
                errors.append("cost.C: missing for model 'shannon'")
            else:
                try:
                    cost = ShannonCost(float(c))
                except (TypeError, ValueError) as exc:
                    errors.append(f"cost: {exc}")
        else:
            errors.append(f"cost.model: must be 'llr' or 'shannon', got {model!r}")

    if "beta_bar" not in raw:
        errors.append("missing field beta_bar")
    beta_bar = raw.get("beta_bar", float("nan"))
    try:
        beta_bar = float(beta_bar)
    except (TypeError, ValueError):
        errors.append(f"beta_bar: not a number: {raw.get('beta_bar')!r}")
        beta_bar = float("nan")

    types: list[SenderType] = []
    types_raw = raw.get("types")
    if types_raw is None:
        errors.append("missing field types")
    elif not isinstance(types_raw, Sequence) or isinstance(types_raw, (str, bytes)):
        errors.append("types: expected a list of {mu, prob} entries")
    else:
        for i, entry in enumerate(types_raw):
            if not isinstance(entry, Mapping) or "mu" not in entry or "prob" not in entry:
                errors.append(f"types[{i}]: expected an object with 'mu' and 'prob'")
                continue
            try:
                types.append(SenderType(float(entry["mu"]), float(entry["prob"])))
            except (TypeError, ValueError):
                errors.append(f"types[{i}]: mu and prob must be numbers")

    if not errors and cost is not None:
        errors.extend(_config_violations(cost, beta_bar, types))
    if errors:
        raise ConfigError(errors)
    return GameConfig(cost=cost, beta_bar=beta_bar, types=tuple(types))


def odds_ratio(beta: float, beta_bar: float) -> float:
    """Odds of the good state at belief beta relative to the threshold odds.

    An experiment persuades a receiver holding interim belief beta exactly
    when q/p does not exceed this ratio. Strictly increasing in beta.
    """
    if not (0.0 < beta < 1.0) or not (0.0 < beta_bar < 1.0):
        raise ValueError(f"beliefs must lie in (0, 1), got beta={beta}, beta_bar={beta_bar}")
    return (beta / (1.0 - beta)) / (beta_bar / (1.0 - beta_bar))


def odds_ratio_inv(r: float, beta_bar: float) -> float:
    """The belief whose odds_ratio equals r. Inverse of odds_ratio in beta."""
    if not (r > 0.0 and math.isfinite(r)):
        raise ValueError(f"ratio must be positive and finite, got {r}")
    if not (0.0 < beta_bar < 1.0):
        raise ValueError(f"beta_bar must lie in (0, 1), got {beta_bar}")
    omega = r * beta_bar / (1.0 - beta_bar)
    return omega / (1.0 + omega)


def posterior(beta: float, pi: Experiment, s: Outcome) -> float:
    """Bayes update of belief beta after outcome s from experiment pi.

    The uninformative experiment leaves the belief unchanged for either
    outcome label. Conditioning on a zero-probability outcome raises.
    """
    if not (0.0 <= beta <= 1.0):
        raise ValueError(f"belief must lie in [0, 1], got {beta}")
    if s not in ("g", "b"):
        raise ValueError(f"outcome must be 'g' or 'b', got {s!r}")
    if pi.uninformative:
        return beta
    if s == "g":
        like_g, like_b = pi.p, pi.q
    else:
        like_g, like_b = 1.0 - pi.p, 1.0 - pi.q
    denom = beta * like_g + (1.0 - beta) * like_b
    if denom == 0.0:
        raise UndefinedPosteriorError(
            f"outcome {s!r} has zero probability under experiment ({pi.p}, {pi.q})")
    return beta * like_g / denom


def is_persuasive(pi: Experiment, beta: float, beta_bar: float) -> bool:
    """True iff the good outcome of pi pushes belief beta to at least beta_bar.

    Tests q <= p * odds_ratio(beta, beta_bar) with exact arithmetic and no
    epsilon slack; ties count as persuasive because the receiver resolves
    indifference to the high action. Experiments constructed on an obedience
    ray as (p, p * odds_ratio(...)) therefore test persuasive at that belief
    bit-for-bit, since the bound is evaluated by the same expression.
    """
    if not (0.0 < beta < 1.0) or not (0.0 < beta_bar < 1.0):
        raise ValueError(f"beliefs must lie in (0, 1), got beta={beta}, beta_bar={beta_bar}")
    if pi.uninformative:
        return beta >= beta_bar
    return pi.q <= pi.p * odds_ratio(beta, beta_bar)


class Blackwell(Enum):
    MORE = "more"
    LESS = "less"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"


def _informativeness_ratios(pi: Experiment) -> tuple[float, float]:
    # Uninformative experiments behave as ratio one on both tests.
    if pi.uninformative:
        return 1.0, 1.0
    return pi.q / pi.p, (1.0 - pi.p) / (1.0 - pi.q)


def blackwell_compare(pi: Experiment, pi2: Experiment) -> Blackwell:
    """Blackwell order: MORE means pi is more informative than pi2.

    pi is weakly more informative iff q/p <= q'/p' and
    (1-p)/(1-q) <= (1-p')/(1-q').
    """
    a1, a2 = _informativeness_ratios(pi)
    b1, b2 = _informativeness_ratios(pi2)
    le = a1 <= b1 and a2 <= b2
    ge = a1 >= b1 and a2 >= b2
    if le and ge:
        return Blackwell.EQUIVALENT
    if le:
        return Blackwell.MORE
    if ge:
        return Blackwell.LESS
    return Blackwell.INCOMPARABLE


@dataclass(frozen=True)
class BeliefState:
    """Interim belief with its outcome posteriors and the type weights behind it."""

    interim: float
    posterior_g: float
    posterior_b: float
    type_weights: tuple[float, ...]

    @classmethod
    def from_type_weights(cls, cfg: GameConfig, weights: Sequence[float],
                          pi: Experiment) -> "BeliefState":
        weights = tuple(float(w) for w in weights)
        if len(weights) != cfg.n_types:
            raise ValueError(f"expected {cfg.n_types} weights, got {len(weights)}")
        if any(w < 0.0 for w in weights) or abs(math.fsum(weights) - 1.0) > _BELIEF_TOL:
            raise ValueError("type weights must be nonnegative and sum to 1")
        interim = math.fsum(w * t.mu for w, t in zip(weights, cfg.types))
        return cls(
            interim=interim,
            posterior_g=posterior(interim, pi, "g"),
            posterior_b=posterior(interim, pi, "b"),
            type_weights=weights,
        )
