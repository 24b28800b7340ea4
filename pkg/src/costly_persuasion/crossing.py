"""Single-crossing analysis: MRS, regime classification, tangency loci.

The sender's payoff from a persuasive experiment is
f(pi, mu) = mu*p + (1-mu)*q - c(pi | mu). The marginal rate of substitution
MRS = -(df/dp)/(df/dq) is the slope of an indifference curve in the (p, q)
plane. Under the LLR cost model the sign of d(MRS)/d(mu) at any interior
experiment is the sign of a one-variable discriminant evaluated at
t = (1-p)q / (p(1-q)):

    D(t) = -(Cg - Cb) ln t + Cg Cb [ (ln t)^2 - (1-t)^2 / t ] - 1.

Indifference curves of two types cross once everywhere iff D <= 0 on (0, 1),
which holds exactly when Cg <= single_crossing_bound(Cb). Above the bound, D
has two roots t_lower < t_upper, and the sign flips on the two loci
p = tangency_low(q) and p = tangency_high(q) (p is decreasing in t at fixed
q, so the low locus in p corresponds to t_upper).

All scalar roots here use bracketed bisection to 1e-12 absolute tolerance in
the unknown, capped at 200 iterations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._roots import bisect_root, scan_bracket
from .errors import RegimeError
from .game import CostModel, Experiment, LlrCost, ShannonCost

_XTOL = 1e-12
_TINY = 1e-12


class Regime(Enum):
    SINGLE_CROSSING = "single-crossing"
    TRIPLE_CROSSING = "triple-crossing"


@dataclass(frozen=True)
class CrossingReport:
    """Classification of an LLR cost pair.

    ``t_peak`` is the unique maximizer of the discriminant when
    cost_good > cost_bad (None otherwise: the discriminant is then below -1
    everywhere and its supremum -1 is approached at t -> 1).
    ``t_lower`` / ``t_upper`` are the discriminant's two roots, present only
    in the triple-crossing regime. ``bound`` is the critical good-news cost
    for the given bad-news cost, and ``aux_root`` the positive solution of
    x - ln(1+x) = 1/cost_bad that parameterizes it.
    """

    regime: Regime
    cost_good: float
    cost_bad: float
    t_peak: float | None
    disc_at_peak: float
    t_lower: float | None
    t_upper: float | None
    bound: float
    aux_root: float

    @property
    def triple(self) -> bool:
        return self.regime is Regime.TRIPLE_CROSSING


def crossing_discriminant(t, cost_good: float, cost_bad: float):
    """Sign of d(MRS)/d(mu) at any experiment with odds ratio t. Vectorized."""
    log_t = np.log(t)
    return (-(cost_good - cost_bad) * log_t
            + cost_good * cost_bad * (log_t ** 2 - (1.0 - t) ** 2 / t) - 1.0)


def experiment_odds(p, q):
    """The likelihood-ratio product t = (1-p)q / (p(1-q)); in (0,1) on the interior."""
    return (1.0 - p) * q / (p * (1.0 - q))


def boundary_aux(cost_bad: float) -> float:
    """Positive root of x - ln(1+x) = 1/cost_bad."""
    if not cost_bad > 0.0:
        raise ValueError(f"cost_bad must be positive, got {cost_bad}")
    target = 1.0 / cost_bad
    hi = target + 50.0
    return bisect_root(lambda x: x - math.log1p(x) - target, _TINY, hi, xtol=_XTOL)


def single_crossing_bound(cost_bad: float) -> float:
    """Critical good-news cost: single crossing holds iff cost_good <= bound."""
    x = boundary_aux(cost_bad)
    return 1.0 / (x * x / (1.0 + x) - 1.0 / cost_bad)


def classify_crossing(cost_good: float, cost_bad: float) -> CrossingReport:
    """Classify an LLR cost pair and locate the discriminant's peak and roots."""
    if not (cost_good > 0.0 and cost_bad > 0.0):
        raise ValueError("cost constants must be positive")
    aux = boundary_aux(cost_bad)
    bound = 1.0 / (aux * aux / (1.0 + aux) - 1.0 / cost_bad)

    if cost_good <= cost_bad:
        # The peak equation 2 ln t - t + 1/t = 1/Cb - 1/Cg has no root in
        # (0, 1): the discriminant increases toward its supremum -1 at t = 1.
        return CrossingReport(Regime.SINGLE_CROSSING, cost_good, cost_bad,
                              t_peak=None, disc_at_peak=-1.0,
                              t_lower=None, t_upper=None,
                              bound=bound, aux_root=aux)

    rhs = 1.0 / cost_bad - 1.0 / cost_good
    t_peak = bisect_root(lambda t: 2.0 * math.log(t) - t + 1.0 / t - rhs,
                         _TINY, 1.0 - _TINY, xtol=_XTOL)
    disc = float(crossing_discriminant(t_peak, cost_good, cost_bad))
    if disc <= 0.0:
        # Weak inequality: the exact boundary cost_good == bound still counts
        # as single crossing.
        return CrossingReport(Regime.SINGLE_CROSSING, cost_good, cost_bad,
                              t_peak=t_peak, disc_at_peak=disc,
                              t_lower=None, t_upper=None,
                              bound=bound, aux_root=aux)

    disc_fn = lambda t: float(crossing_discriminant(t, cost_good, cost_bad))
    t_upper = bisect_root(disc_fn, t_peak, 1.0 - _TINY, xtol=_XTOL, flo=disc)
    t_lower = bisect_root(disc_fn, _TINY, t_peak, xtol=_XTOL, fhi=disc)
    return CrossingReport(Regime.TRIPLE_CROSSING, cost_good, cost_bad,
                          t_peak=t_peak, disc_at_peak=disc,
                          t_lower=t_lower, t_upper=t_upper,
                          bound=bound, aux_root=aux)


def tangency_low(q, report: CrossingReport):
    """Lower tangency locus in p (pooling candidates live here). Vectorized in q."""
    if not report.triple:
        raise RegimeError("tangency loci exist only in the triple-crossing regime",
                          cost_good=report.cost_good, bound=report.bound)
    return q / (q + report.t_upper * (1.0 - q))


def tangency_high(q, report: CrossingReport):
    """Upper tangency locus in p. Vectorized in q."""
    if not report.triple:
        raise RegimeError("tangency loci exist only in the triple-crossing regime",
                          cost_good=report.cost_good, bound=report.bound)
    return q / (q + report.t_lower * (1.0 - q))


# -- Marginal rate of substitution --------------------------------------------

def _llr_mrs_terms(p: float, q: float, cost_good: float, cost_bad: float):
    """Coefficients of the Moebius form MRS(mu) = (a1 + a2 mu)/(a3 + a4 mu)."""
    log_lr = math.log(p * (1.0 - q) / ((1.0 - p) * q))
    d_p = (p - q) / (p * (1.0 - p))
    d_q = (p - q) / (q * (1.0 - q))
    a1 = cost_bad * d_p
    a2 = -1.0 + cost_good * log_lr - cost_bad * d_p
    a3 = 1.0 + cost_bad * log_lr
    a4 = -1.0 + cost_good * d_q - cost_bad * log_lr
    return a1, a2, a3, a4


def mrs(pi: Experiment, mu: float, model: CostModel) -> float:
    """Indifference-curve slope -(df/dp)/(df/dq) at an interior experiment.

    The uninformative experiment returns the costless slope -mu/(1-mu).
    Raises on the p = 1 / q = 0 boundary where the slope is not defined.
    """
    if not 0.0 < mu < 1.0:
        raise ValueError(f"mrs requires mu in (0, 1), got {mu}")
    if pi.uninformative:
        return -mu / (1.0 - mu)
    if not pi.interior:
        raise ValueError(f"mrs undefined on the boundary: ({pi.p}, {pi.q})")
    if isinstance(model, LlrCost):
        a1, a2, a3, a4 = _llr_mrs_terms(pi.p, pi.q, model.cost_good, model.cost_bad)
        return (a1 + a2 * mu) / (a3 + a4 * mu)
    if isinstance(model, ShannonCost):
        return _shannon_mrs(pi.p, pi.q, mu, model.scale)
    raise TypeError(f"unknown cost model: {model!r}")


def _shannon_mrs(p: float, q: float, mu: float, scale: float) -> float:
    r = mu * p + (1.0 - mu) * q
    log_gap = math.log((1.0 - q) / q) - math.log((1.0 - p) / p)
    denom = 1.0 + scale * (math.log((1.0 - q) / q) - math.log((1.0 - r) / r))
    return -(mu / (1.0 - mu)) * (1.0 - scale * log_gap / denom)


def mrs_prior_trend(pi: Experiment, cost_good: float, cost_bad: float, *,
                    tol: float = 1e-9) -> int:
    """Sign of d(MRS)/d(mu) at an interior experiment under the LLR model.

    Returns -1, 0, or +1; zero when the discriminant is within tol of zero,
    which happens exactly on the tangency loci.
    """
    if not pi.interior:
        raise ValueError(f"trend defined on the interior only: ({pi.p}, {pi.q})")
    disc = float(crossing_discriminant(experiment_odds(pi.p, pi.q),
                                       cost_good, cost_bad))
    if abs(disc) <= tol:
        return 0
    return 1 if disc > 0.0 else -1


# -- Entropy-cost loci ---------------------------------------------------------

def shannon_peak_locus(q: float, scale: float) -> float:
    """Boundary p above which the entropy-model MRS is single-peaked in mu.

    Solves ln[p(1-q) / ((1-p)q)] = 1/scale, i.e. the slope of MRS in mu at
    mu -> 0 changes sign. Below the locus the MRS is decreasing in mu.
    """
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    if not scale > 0.0:
        raise ValueError(f"scale must be positive, got {scale}")
    return q / (q + (1.0 - q) * math.exp(-1.0 / scale))


def shannon_equal_mrs_locus(q: float, scale: float, mu_lo: float, mu_hi: float) -> float:
    """The unique p above shannon_peak_locus(q) where two types' MRS agree.

    Below the returned p the lower type's indifference curve is steeper;
    above, the higher type's is.
    """
    if not mu_lo < mu_hi:
        raise ValueError(f"need mu_lo < mu_hi, got {mu_lo}, {mu_hi}")
    start = shannon_peak_locus(q, scale)
    gap = lambda p: (_shannon_mrs(p, q, mu_lo, scale)
                     - _shannon_mrs(p, q, mu_hi, scale))
    lo = min(start * (1.0 + 1e-9), 1.0 - 1e-9)
    hi = 1.0 - 1e-9
    if gap(lo) <= 0.0 or gap(hi) >= 0.0:
        found = scan_bracket(gap, lo, hi, 512)
        if found is None:
            raise RuntimeError(f"no MRS crossing found above the peak locus for q={q}")
        lo, hi, _, _ = found
    return bisect_root(gap, lo, hi, xtol=_XTOL)


# -- Indifference-curve tracing -------------------------------------------------

def trace_indifference(pi: Experiment, mu: float, model: CostModel, *,
                       p_stop: float, step: float = 1e-3,
                       margin: float = 1e-6) -> tuple[np.ndarray, np.ndarray]:
    """Trace the indifference curve through pi toward p_stop.

    Integrates dq/dp = MRS with fixed-step classical RK4 (signed step toward
    p_stop), stopping early if the curve leaves the interior by more than
    margin. Returns the sampled (p, q) arrays, starting at pi.
    """
    if not pi.interior:
        raise ValueError("tracing starts from an interior experiment")

    guard = 0.25 * margin

    def slope(p: float, q: float) -> float | None:
        # Intermediate stages may poke outside the triangle near its edges.
        if not (guard < q < p - guard and p < 1.0 - guard):
            return None
        return mrs(Experiment(p, q), mu, model)

    h = step if p_stop >= pi.p else -step
    ps = [pi.p]
    qs = [pi.q]
    p, q = pi.p, pi.q
    n_steps = int(abs(p_stop - pi.p) / step)
    for _ in range(n_steps):
        k1 = slope(p, q)
        if k1 is None:
            break
        k2 = slope(p + 0.5 * h, q + 0.5 * h * k1)
        if k2 is None:
            break
        k3 = slope(p + 0.5 * h, q + 0.5 * h * k2)
        if k3 is None:
            break
        k4 = slope(p + h, q + h * k3)
        if k4 is None:
            break
        q_next = q + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        p_next = p + h
        if not (margin < q_next < p_next - margin and margin < p_next < 1.0 - margin):
            break
        p, q = p_next, q_next
        ps.append(p)
        qs.append(q)
    return np.asarray(ps), np.asarray(qs)


def indifference_level_crossings(pi: Experiment, mu_a: float, mu_b: float,
                                 model: CostModel, *, step: float = 1e-3) -> int:
    """Count sign changes of q_a(p) - q_b(p) along traced curves through pi.

    Both types' indifference curves pass through pi, so crossings away from
    the start are counted on the left and right traces separately.
    """
    count = 0
    for p_stop in (1.0 - 1e-6, 1e-6):
        pa, qa = trace_indifference(pi, mu_a, model, p_stop=p_stop, step=step)
        pb, qb = trace_indifference(pi, mu_b, model, p_stop=p_stop, step=step)
        n = min(len(pa), len(pb))
        gap = qa[:n] - qb[:n]
        # Skip the shared start; count strict sign flips beyond it.
        sign = 0
        for g in gap[1:]:
            s = 1 if g > 0 else (-1 if g < 0 else 0)
            if s != 0 and sign != 0 and s != sign:
                count += 1
            if s != 0:
                sign = s
    return count
