"""Sequential-sampling microfoundation of the LLR cost.

A sender draws iid binary signals of accuracy alpha > 1/2 and stops the
first time the good-minus-bad signal count hits n_high > 0 or n_low < 0.
The stopped rule is outcome-equivalent to a binary experiment whose
conditional good-outcome probabilities are gambler's-ruin absorption
probabilities, and the expected sampling cost (a good draw costs c_g, a bad
draw c_b) equals the LLR experiment cost with constants

    C_s = c_bar_s / [(2 alpha - 1) ln(alpha / (1 - alpha))],
    c_bar_g = alpha c_g + (1 - alpha) c_b,   c_bar_b = (1 - alpha) c_g + alpha c_b.

The Monte Carlo check uses a counter-based generator: draw r of path i is a
SplitMix64 output keyed by (seed, i, r), so any serial or parallel schedule
over disjoint path ranges produces bit-identical signal streams. Summary
moments are accumulated one chunk at a time with a single pass (pairwise
mean/M2 combination), keeping memory flat for very large path counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .costs import cost as experiment_cost
from .game import Experiment, LlrCost

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15  # SplitMix64 stream increment
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_STEP_CAP = 10_000_000


@dataclass(frozen=True)
class WaldConfig:
    """Sampling-problem instance; thresholds are signal-count differences."""

    alpha: float
    draw_cost_good: float
    draw_cost_bad: float
    n_high: int
    n_low: int
    mu0: float
    seed: int
    n_paths: int

    def __post_init__(self):
        if not 0.5 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0.5, 1), got {self.alpha}")
        if self.draw_cost_good < 0.0 or self.draw_cost_bad < 0.0:
            raise ValueError("draw costs must be nonnegative")
        if not (isinstance(self.n_high, int) and self.n_high >= 1):
            raise ValueError(f"n_high must be an integer >= 1, got {self.n_high}")
        if not (isinstance(self.n_low, int) and self.n_low <= -1):
            raise ValueError(f"n_low must be an integer <= -1, got {self.n_low}")
        if not 0.0 < self.mu0 < 1.0:
            raise ValueError(f"mu0 must lie in (0, 1), got {self.mu0}")
        if not (isinstance(self.n_paths, int) and self.n_paths >= 1):
            raise ValueError(f"n_paths must be a positive integer, got {self.n_paths}")


def thresholds_to_experiment(alpha: float, n_high: int, n_low: int) -> Experiment:
    """Absorption probabilities of the stopped +/-1 walk as an experiment.

    With x = (1-alpha)/alpha, drop d = -n_low and rise b = n_high:
    p = (1 - x^d) / (1 - x^(b+d)) under the good state, and the bad state
    inverts the drift, which collapses to q = x^b * p.
    """
    x = (1.0 - alpha) / alpha
    d, b = -n_low, n_high
    p = (1.0 - x ** d) / (1.0 - x ** (b + d))
    return Experiment(p, x ** b * p)


def posterior_thresholds(mu0: float, alpha: float, n_high: int,
                         n_low: int) -> tuple[float, float]:
    """Beliefs at the two stopping boundaries: (after good, after bad)."""
    x = (1.0 - alpha) / alpha
    odds = (1.0 - mu0) / mu0
    return 1.0 / (1.0 + odds * x ** n_high), 1.0 / (1.0 + odds * x ** n_low)


def map_to_llr_constants(alpha: float, draw_cost_good: float,
                         draw_cost_bad: float) -> tuple[float, float]:
    """LLR cost constants replicating the expected sampling cost."""
    denom = (2.0 * alpha - 1.0) * math.log(alpha / (1.0 - alpha))
    c_bar_g = alpha * draw_cost_good + (1.0 - alpha) * draw_cost_bad
    c_bar_b = (1.0 - alpha) * draw_cost_good + alpha * draw_cost_bad
    return c_bar_g / denom, c_bar_b / denom


def closed_form_cost_by_state(wcfg: WaldConfig) -> tuple[float, float]:
    """Expected sampling cost conditional on the good and the bad state."""
    x = (1.0 - wcfg.alpha) / wcfg.alpha
    nb, nl = wcfg.n_high, wcfg.n_low
    c_bar_g = wcfg.alpha * wcfg.draw_cost_good + (1.0 - wcfg.alpha) * wcfg.draw_cost_bad
    c_bar_b = ((1.0 - wcfg.alpha) * wcfg.draw_cost_good
               + wcfg.alpha * wcfg.draw_cost_bad)
    span = x ** nl - x ** nb
    drift = 2.0 * wcfg.alpha - 1.0
    good = c_bar_g / drift * (nb * (x ** nl - 1.0) - nl * (x ** nb - 1.0)) / span
    bad = c_bar_b / drift * (nb * (x ** nb - x ** (nb + nl))
                             - nl * (x ** nl - x ** (nb + nl))) / span
    return good, bad


def closed_form_cost(wcfg: WaldConfig) -> float:
    """Unconditional expected sampling cost of the threshold rule."""
    good, bad = closed_form_cost_by_state(wcfg)
    return wcfg.mu0 * good + (1.0 - wcfg.mu0) * bad


def equivalent_llr_cost(wcfg: WaldConfig) -> float:
    """The mapped LLR cost of the equivalent experiment at the prior mu0."""
    c_good, c_bad = map_to_llr_constants(wcfg.alpha, wcfg.draw_cost_good,
                                         wcfg.draw_cost_bad)
    pi = thresholds_to_experiment(wcfg.alpha, wcfg.n_high, wcfg.n_low)
    return experiment_cost(pi, wcfg.mu0, LlrCost(c_good, c_bad))


@dataclass(frozen=True)
class SimStats:
    """Monte Carlo summary; bit-identical across reruns for a fixed config."""

    n_paths: int
    seed: int
    mean_cost: float
    se_cost: float
    mean_draws: float
    p_emp: float
    q_emp: float
    n_good_state: int
    n_bad_state: int
    draws_good_state: int
    draws_bad_state: int
    mean_cost_good: float
    se_cost_good: float
    mean_cost_bad: float
    se_cost_bad: float
    cap_hits: int


class _Moments:
    """Single-pass mean/variance accumulation, combinable chunk by chunk."""

    def __init__(self):
        self.n = 0
        self.mean = 0.0
        self.m2 = 0.0

    def add_chunk(self, values: np.ndarray) -> None:
        nb = len(values)
        if nb == 0:
            return
        mb = float(values.mean())
        m2b = float(((values - mb) ** 2).sum())
        if self.n == 0:
            self.n, self.mean, self.m2 = nb, mb, m2b
            return
        n = self.n + nb
        delta = mb - self.mean
        self.mean += delta * nb / n
        self.m2 += m2b + delta * delta * self.n * nb / n
        self.n = n

    @property
    def se(self) -> float:
        if self.n < 2:
            return float("nan")
        return math.sqrt(self.m2 / (self.n - 1) / self.n)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= _M1
    z ^= z >> np.uint64(27)
    z *= _M2
    z ^= z >> np.uint64(31)
    return z


def _uniform(keys: np.ndarray, step: int) -> np.ndarray:
    """Draw step `step` for the paths with stream keys `keys`, in [0, 1)."""
    offset = np.uint64((step * _GAMMA) & _MASK64)
    return (_mix64(keys + offset) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


def _path_keys(seed: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start + 1, stop + 1, dtype=np.uint64)
    base = np.uint64(seed & _MASK64)
    return _mix64(base + idx * np.uint64(_GAMMA))


def simulate(wcfg: WaldConfig, *, chunk_size: int = 1 << 19,
             step_cap: int = _STEP_CAP) -> SimStats:
    """Simulate the threshold rule path by path.

    Paths absorb in finite time almost surely; step_cap only guards
    pathological configurations, and capped paths are counted in
    ``cap_hits`` (their draws enter the summaries censored at the cap) and
    excluded from the empirical outcome frequencies.
    """
    cost_all = _Moments()
    cost_good_state = _Moments()
    cost_bad_state = _Moments()
    draws_total = 0
    draws_by_state = [0, 0]
    n_by_state = [0, 0]
    outcomes_good = [0, 0]  # good-outcome counts among absorbed, by state
    absorbed_by_state = [0, 0]
    cap_hits = 0

    for start in range(0, wcfg.n_paths, chunk_size):
        stop = min(start + chunk_size, wcfg.n_paths)
        keys = _path_keys(wcfg.seed, start, stop)
        n = stop - start
        good_state = _uniform(keys, 0) < wcfg.mu0
        p_up = np.where(good_state, wcfg.alpha, 1.0 - wcfg.alpha)
        pos = np.zeros(n, dtype=np.int64)
        n_good_sig = np.zeros(n, dtype=np.int64)
        draws = np.zeros(n, dtype=np.int64)
        live = np.arange(n)
        step = 0
        while len(live) and step < step_cap:
            step += 1
            up = _uniform(keys[live], step) < p_up[live]
            pos[live] += np.where(up, 1, -1)
            n_good_sig[live] += up
            hit = (pos[live] >= wcfg.n_high) | (pos[live] <= wcfg.n_low)
            draws[live[hit]] = step
            live = live[~hit]
        cap_hits += len(live)
        draws[live] = step
        absorbed = np.ones(n, dtype=bool)
        absorbed[live] = False

        n_bad_sig = draws - n_good_sig
        path_cost = (wcfg.draw_cost_good * n_good_sig
                     + wcfg.draw_cost_bad * n_bad_sig).astype(np.float64)
        cost_all.add_chunk(path_cost)
        cost_good_state.add_chunk(path_cost[good_state])
        cost_bad_state.add_chunk(path_cost[~good_state])
        draws_total += int(draws.sum())
        for state, mask in ((0, good_state), (1, ~good_state)):
            n_by_state[state] += int(mask.sum())
            draws_by_state[state] += int(draws[mask].sum())
            absorbed_by_state[state] += int((mask & absorbed).sum())
            outcomes_good[state] += int((mask & absorbed
                                         & (pos >= wcfg.n_high)).sum())

    p_emp = (outcomes_good[0] / absorbed_by_state[0]
             if absorbed_by_state[0] else float("nan"))
    q_emp = (outcomes_good[1] / absorbed_by_state[1]
             if absorbed_by_state[1] else float("nan"))
    return SimStats(
        n_paths=wcfg.n_paths,
        seed=wcfg.seed,
        mean_cost=cost_all.mean,
        se_cost=cost_all.se,
        mean_draws=draws_total / wcfg.n_paths,
        p_emp=p_emp,
        q_emp=q_emp,
        n_good_state=n_by_state[0],
        n_bad_state=n_by_state[1],
        draws_good_state=draws_by_state[0],
        draws_bad_state=draws_by_state[1],
        mean_cost_good=cost_good_state.mean,
        se_cost_good=cost_good_state.se,
        mean_cost_bad=cost_bad_state.mean,
        se_cost_bad=cost_bad_state.se,
        cap_hits=cap_hits,
    )
