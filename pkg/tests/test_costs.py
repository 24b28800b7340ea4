import math

import numpy as np
import pytest

from costly_persuasion import (Blackwell, Experiment, LlrCost, ShannonCost,
                               UNINFORMATIVE, blackwell_compare, cost,
                               kl_bernoulli, llr_potential, posterior,
                               sender_payoff, shannon_potential)
from support import draw_interior_experiment, draw_llr

LN3 = math.log(3.0)


def expectation_form(pi: Experiment, mu: float, model) -> float:
    """E[H(mu) - H(posterior)] computed through the potentials directly."""
    if isinstance(model, LlrCost):
        h = lambda x: llr_potential(x, model.cost_good, model.cost_bad)
    else:
        h = lambda x: shannon_potential(x, model.scale)
    prob_g = mu * pi.p + (1.0 - mu) * pi.q
    post_g = posterior(mu, pi, "g")
    post_b = posterior(mu, pi, "b")
    return h(mu) - (prob_g * h(post_g) + (1.0 - prob_g) * h(post_b))


class TestPotentials:
    def test_llr_zero_at_half(self):
        assert llr_potential(0.5, 3.0, 7.0) == 0.0

    def test_llr_hand_value(self):
        assert llr_potential(0.25, 1.0, 1.0) == pytest.approx(-0.5 * LN3, abs=1e-14)

    def test_llr_symmetric_when_costs_equal(self):
        for mu in (0.1, 0.3, 0.45):
            assert llr_potential(mu, 2.0, 2.0) == pytest.approx(
                llr_potential(1.0 - mu, 2.0, 2.0), abs=1e-12)

    def test_llr_boundary_raises(self):
        for mu in (0.0, 1.0):
            with pytest.raises(ValueError):
                llr_potential(mu, 1.0, 1.0)

    def test_shannon_endpoints(self):
        assert shannon_potential(0.0, 2.0) == 0.0
        assert shannon_potential(1.0, 2.0) == 0.0
        assert shannon_potential(0.5, 1.0) == pytest.approx(math.log(2), abs=1e-15)


class TestKl:
    def test_zero_on_diagonal(self):
        assert kl_bernoulli(0.3, 0.3) == 0.0

    def test_infinite_when_support_mismatch(self):
        assert kl_bernoulli(0.5, 0.0) == math.inf
        assert kl_bernoulli(0.5, 1.0) == math.inf
        assert kl_bernoulli(1.0, 0.5) == pytest.approx(math.log(2), abs=1e-15)


class TestCost:
    def test_uninformative_is_free(self):
        for model in (LlrCost(3.0, 0.5), ShannonCost(2.0)):
            for mu in (0.1, 0.5, 0.9):
                assert cost(UNINFORMATIVE, mu, model) == 0.0

    def test_state_revealing_is_infinite_under_llr(self):
        assert cost(Experiment(0.7, 0.0), 0.5, LlrCost(1, 1)) == math.inf
        assert cost(Experiment(1.0, 0.3), 0.5, LlrCost(1, 1)) == math.inf

    def test_state_revealing_is_finite_under_shannon(self):
        assert cost(Experiment(0.7, 0.0), 0.5, ShannonCost(1.0)) < math.inf
        assert cost(Experiment(1.0, 0.0), 0.5, ShannonCost(1.0)) == pytest.approx(
            math.log(2), abs=1e-12)

    def test_llr_hand_value(self):
        got = cost(Experiment(0.75, 0.25), 0.5, LlrCost(1, 1))
        assert got == pytest.approx(0.5 * LN3, abs=1e-14)

    def test_shannon_hand_value(self):
        h_075 = -(0.75 * math.log(0.75) + 0.25 * math.log(0.25))
        got = cost(Experiment(0.75, 0.25), 0.5, ShannonCost(1.0))
        assert got == pytest.approx(math.log(2) - h_075, abs=1e-14)

    def test_forms_agree_llr(self):
        rng = np.random.default_rng(10)
        for _ in range(1000):
            p, q = draw_interior_experiment(rng, margin=1e-3, min_gap=1e-3)
            mu = rng.uniform(0.01, 0.99)
            model = draw_llr(rng, 0.05, 20.0)
            pi = Experiment(p, q)
            assert cost(pi, mu, model) == pytest.approx(
                expectation_form(pi, mu, model), abs=1e-10)

    def test_forms_agree_shannon(self):
        rng = np.random.default_rng(11)
        for _ in range(500):
            p, q = draw_interior_experiment(rng, margin=1e-3, min_gap=1e-3)
            mu = rng.uniform(0.01, 0.99)
            model = ShannonCost(float(10 ** rng.uniform(-1.3, 1.3)))
            pi = Experiment(p, q)
            assert cost(pi, mu, model) == pytest.approx(
                expectation_form(pi, mu, model), abs=1e-10)

    def test_affine_in_prior_under_llr(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            p, q = draw_interior_experiment(rng)
            model = draw_llr(rng)
            pi = Experiment(p, q)
            c = [cost(pi, mu, model) for mu in (0.2, 0.5, 0.8)]
            assert c[1] == pytest.approx(0.5 * (c[0] + c[2]), abs=1e-12)

    def test_blackwell_monotone(self):
        rng = np.random.default_rng(13)
        checked = 0
        while checked < 200:
            a = Experiment(*sorted(rng.uniform(0.02, 0.98, 2), reverse=True))
            b = Experiment(*sorted(rng.uniform(0.02, 0.98, 2), reverse=True))
            order = blackwell_compare(a, b)
            if order not in (Blackwell.MORE, Blackwell.LESS):
                continue
            hi, lo = (a, b) if order is Blackwell.MORE else (b, a)
            mu = rng.uniform(0.05, 0.95)
            for model in (draw_llr(rng), ShannonCost(float(rng.uniform(0.2, 3.0)))):
                assert cost(hi, mu, model) >= cost(lo, mu, model) - 1e-12
            checked += 1

    def test_shannon_nonnegative_zero_only_uninformative(self):
        rng = np.random.default_rng(14)
        model = ShannonCost(1.0)
        for _ in range(300):
            p, q = draw_interior_experiment(rng, margin=0.01, min_gap=0.01)
            assert cost(Experiment(p, q), rng.uniform(0.05, 0.95), model) > 0.0
        assert cost(UNINFORMATIVE, 0.4, model) == 0.0

    def test_convex_along_segments(self):
        # The cost is jointly convex in (p, q): midpoint cost never exceeds
        # the average, so the payoff is concave along every segment.
        rng = np.random.default_rng(15)
        for _ in range(300):
            p1, q1 = draw_interior_experiment(rng)
            p2, q2 = draw_interior_experiment(rng)
            mu = rng.uniform(0.05, 0.95)
            for model in (draw_llr(rng), ShannonCost(float(rng.uniform(0.2, 3.0)))):
                mid = cost(Experiment(0.5 * (p1 + p2), 0.5 * (q1 + q2)), mu, model)
                avg = 0.5 * (cost(Experiment(p1, q1), mu, model)
                             + cost(Experiment(p2, q2), mu, model))
                assert mid <= avg + 1e-12


class TestSenderPayoff:
    def test_hand_value(self):
        got = sender_payoff(Experiment(0.75, 0.25), 0.5, LlrCost(1, 1))
        assert got == pytest.approx(0.5 - 0.5 * LN3, abs=1e-14)

    def test_infinite_cost_gives_minus_infinity(self):
        assert sender_payoff(Experiment(0.7, 0.0), 0.5, LlrCost(1, 1)) == -math.inf

    def test_vanishes_along_obedience_ray_at_origin(self):
        model = LlrCost(2.0, 0.7)
        ratio = 0.35
        values = [sender_payoff(Experiment(p, ratio * p), 0.4, model)
                  for p in (1e-4, 1e-6, 1e-8)]
        assert abs(values[0]) > abs(values[1]) > abs(values[2])
        assert values[2] == pytest.approx(0.0, abs=1e-6)

    def test_zero_cost_limit_is_gross_payoff(self):
        pi = Experiment(0.8, 0.3)
        tiny = LlrCost(1e-12, 1e-12)
        assert sender_payoff(pi, 0.4, tiny) == pytest.approx(
            0.4 * 0.8 + 0.6 * 0.3, abs=1e-10)

    def test_endpoint_priors_accepted(self):
        pi = Experiment(0.8, 0.3)
        model = LlrCost(1.5, 0.5)
        f0 = sender_payoff(pi, 0.0, model)
        f1 = sender_payoff(pi, 1.0, model)
        fmid = sender_payoff(pi, 0.5, model)
        assert fmid == pytest.approx(0.5 * (f0 + f1), abs=1e-12)
