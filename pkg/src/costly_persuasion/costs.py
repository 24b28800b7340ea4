"""Experiment cost functions and the sender's payoff.

Both cost models are expected reductions of a potential over the sender's
belief, c(pi | mu) = E[H(mu) - H(mu_hat)] with mu_hat the posterior induced
by the experiment:

* log-likelihood-ratio model:
  H(mu) = C_g mu ln((1-mu)/mu) + C_b (1-mu) ln(mu/(1-mu)), which collapses to
  the closed form c = C_g mu KL(P||Q) + C_b (1-mu) KL(Q||P) for Bernoulli
  P = Ber(p), Q = Ber(q). State-revealing experiments (q = 0 < p or
  q < p = 1) cost +inf, represented exactly, never by a finite sentinel.
* entropy model: H(mu) = -C [mu ln mu + (1-mu) ln(1-mu)]; finite everywhere.

Natural logarithms throughout; p and q are never clamped away from the
boundaries, boundary detection is exact comparison with 0 and 1.

The scalar cost is affine in mu for a fixed experiment, so it extends
continuously to mu in {0, 1}; the closed [0, 1] domain is accepted here
(the potentials themselves stay on the open interval where they are finite).
"""

from __future__ import annotations

import math

import numpy as np

from .game import CostModel, Experiment, LlrCost, ShannonCost


def llr_potential(mu: float, cost_good: float, cost_bad: float) -> float:
    """Weighted log-likelihood-ratio potential; finite only on (0, 1)."""
    if not 0.0 < mu < 1.0:
        raise ValueError(f"potential requires mu in (0, 1), got {mu}")
    log_odds = math.log((1.0 - mu) / mu)
    return cost_good * mu * log_odds - cost_bad * (1.0 - mu) * log_odds


def shannon_potential(mu: float, scale: float) -> float:
    """Scaled binary entropy in nats; 0 at the endpoints by continuity."""
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"potential requires mu in [0, 1], got {mu}")
    return scale * _entropy(mu)


def _entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -(x * math.log(x) + (1.0 - x) * math.log1p(-x))


def kl_bernoulli(p: float, q: float) -> float:
    """KL divergence of Ber(p) from Ber(q); +inf when q reveals what p does not."""
    out = 0.0
    if p > 0.0:
        if q == 0.0:
            return math.inf
        out += p * math.log(p / q)
    if p < 1.0:
        if q == 1.0:
            return math.inf
        out += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return out


def cost(pi: Experiment, mu: float, model: CostModel) -> float:
    """Cost of running pi for a sender with prior mu. May be +inf (LLR only)."""
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"cost requires mu in [0, 1], got {mu}")
    if pi.uninformative:
        return 0.0
    if isinstance(model, LlrCost):
        # Endpoint priors weight one KL term by zero; keep 0 * inf out.
        good = model.cost_good * mu * kl_bernoulli(pi.p, pi.q) if mu > 0.0 else 0.0
        bad = model.cost_bad * (1.0 - mu) * kl_bernoulli(pi.q, pi.p) if mu < 1.0 else 0.0
        return good + bad
    if isinstance(model, ShannonCost):
        prob_g = mu * pi.p + (1.0 - mu) * pi.q
        post_g = mu * pi.p / prob_g if prob_g > 0.0 else mu
        post_b = mu * (1.0 - pi.p) / (1.0 - prob_g) if prob_g < 1.0 else mu
        mean_posterior_entropy = (prob_g * _entropy(post_g)
                                  + (1.0 - prob_g) * _entropy(post_b))
        return model.scale * (_entropy(mu) - mean_posterior_entropy)
    raise TypeError(f"unknown cost model: {model!r}")


def sender_payoff(pi: Experiment, mu: float, model: CostModel) -> float:
    """Expected payoff mu*p + (1-mu)*q - cost(pi | mu) when pi persuades.

    -inf exactly when the cost is infinite.
    """
    c = cost(pi, mu, model)
    if c == math.inf:
        return -math.inf
    return mu * pi.p + (1.0 - mu) * pi.q - c


# -- Array versions for grid sweeps ------------------------------------------
#
# These accept numpy arrays of interior experiments (0 < q <= p < 1, with
# p == q rows allowed and costing zero). Boundary rows are the caller's
# responsibility: the verifier excludes them as exactly dominated.

def payoff_grid(p: np.ndarray, q: np.ndarray, mu: float, model: CostModel) -> np.ndarray:
    return mu * p + (1.0 - mu) * q - cost_grid(p, q, mu, model)


def cost_grid(p: np.ndarray, q: np.ndarray, mu: float, model: CostModel) -> np.ndarray:
    if isinstance(model, LlrCost):
        kl_pq = _kl_arrays(p, q)
        kl_qp = _kl_arrays(q, p)
        return model.cost_good * mu * kl_pq + model.cost_bad * (1.0 - mu) * kl_qp
    if isinstance(model, ShannonCost):
        prob_g = mu * p + (1.0 - mu) * q
        post_g = np.where(prob_g > 0.0, mu * p / np.where(prob_g > 0.0, prob_g, 1.0), mu)
        post_b = np.where(prob_g < 1.0,
                          mu * (1.0 - p) / np.where(prob_g < 1.0, 1.0 - prob_g, 1.0), mu)
        mean_h = prob_g * _entropy_arr(post_g) + (1.0 - prob_g) * _entropy_arr(post_b)
        return model.scale * (_entropy(mu) - mean_h)
    raise TypeError(f"unknown cost model: {model!r}")


def _kl_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.where(a > 0.0, a * np.log(a / b), 0.0)
        t2 = np.where(a < 1.0, (1.0 - a) * np.log((1.0 - a) / (1.0 - b)), 0.0)
    out = t1 + t2
    return np.where(a == b, 0.0, out)


def _entropy_arr(x: np.ndarray) -> np.ndarray:
    inside = (x > 0.0) & (x < 1.0)
    safe = np.where(inside, x, 0.5)
    return np.where(inside, -(safe * np.log(safe) + (1.0 - safe) * np.log1p(-safe)), 0.0)
