import math

import numpy as np
import pytest

from costly_persuasion import (Experiment, LlrCost, RegimeError, Regime,
                               ShannonCost, UNINFORMATIVE, boundary_aux,
                               classify_crossing, crossing_discriminant,
                               experiment_odds, mrs, mrs_prior_trend,
                               shannon_equal_mrs_locus, shannon_peak_locus,
                               single_crossing_bound, tangency_high,
                               tangency_low, trace_indifference)
from costly_persuasion.crossing import indifference_level_crossings
from support import draw_interior_experiment, mrs_mu_fd, payoff_fd_mrs


class TestDiscriminant:
    def test_approaches_minus_one_at_t_one(self):
        assert crossing_discriminant(1.0 - 1e-9, 4.0, 2.0) == pytest.approx(
            -1.0, abs=1e-6)

    def test_hand_value(self):
        assert crossing_discriminant(0.5, 1.0, 1.0) == pytest.approx(
            -1.019546986, abs=1e-8)

    def test_diverges_at_zero(self):
        assert crossing_discriminant(1e-6, 3.0, 0.5) < -1e3

    def test_matches_two_variable_form(self):
        # The discriminant depends on (p, q) only through the odds product t.
        rng = np.random.default_rng(20)
        for _ in range(200):
            p, q = draw_interior_experiment(rng, margin=0.02)
            cg, cb = rng.uniform(0.1, 8.0, size=2)
            t = experiment_odds(p, q)
            same_t = 0.3 * (1.0 - t) / (0.3 * (1.0 - t) + t)  # another (p,q) with odds t
            q2 = 0.3
            p2 = q2 / (q2 + t * (1.0 - q2))
            assert crossing_discriminant(experiment_odds(p2, q2), cg, cb) == \
                pytest.approx(crossing_discriminant(t, cg, cb), rel=1e-12)


class TestBoundary:
    def test_aux_root_value(self):
        assert boundary_aux(1.0) == pytest.approx(2.1461932206, abs=1e-8)

    def test_aux_root_identity(self):
        for cb in (0.1, 0.7, 1.0, 4.0, 10.0):
            x = boundary_aux(cb)
            assert x - math.log1p(x) == pytest.approx(1.0 / cb, abs=1e-12)

    def test_aux_root_shrinks_with_cost(self):
        assert boundary_aux(50.0) < boundary_aux(5.0) < boundary_aux(0.5)

    def test_bound_value(self):
        assert single_crossing_bound(1.0) == pytest.approx(2.15500, abs=1e-4)

    def test_bound_monotone(self):
        assert single_crossing_bound(0.5) < single_crossing_bound(1.0)

    def test_bound_above_bad_cost(self):
        for cb in np.arange(0.1, 10.05, 0.1):
            assert single_crossing_bound(float(cb)) > cb

    def test_peak_discriminant_vanishes_on_boundary(self):
        for cb in (0.2, 1.0, 3.0):
            report = classify_crossing(single_crossing_bound(cb), cb)
            assert report.t_peak is not None
            assert abs(report.disc_at_peak) < 1e-8
            # Weak inequality: the exact boundary stays single crossing.
            assert report.regime is Regime.SINGLE_CROSSING

    def test_boundary_peak_location(self):
        report = classify_crossing(single_crossing_bound(1.0), 1.0)
        assert report.t_peak == pytest.approx(1.0 / (1.0 + boundary_aux(1.0)),
                                              abs=1e-9)
        assert report.t_peak == pytest.approx(0.3178, abs=1e-4)


class TestClassification:
    def test_cheap_good_news_single_crossing(self):
        report = classify_crossing(1.0, 2.0)
        assert report.regime is Regime.SINGLE_CROSSING
        assert report.t_peak is None and report.disc_at_peak == -1.0

    def test_triple_crossing(self):
        report = classify_crossing(5.0, 1.0)
        assert report.regime is Regime.TRIPLE_CROSSING
        assert 0.0 < report.t_lower < report.t_peak < report.t_upper < 1.0
        for root in (report.t_lower, report.t_upper):
            assert abs(crossing_discriminant(root, 5.0, 1.0)) < 1e-9

    def test_loci_ordering(self):
        report = classify_crossing(5.0, 1.0)
        for q in (0.05, 0.3, 0.6, 0.9):
            low = tangency_low(q, report)
            high = tangency_high(q, report)
            assert q < low < high < 1.0

    def test_locus_formula(self):
        report = classify_crossing(5.0, 1.0)
        object.__setattr__(report, "t_upper", 0.6)
        assert tangency_low(0.5, report) == pytest.approx(0.625, abs=1e-12)

    def test_locus_ratio_increasing_in_q(self):
        report = classify_crossing(5.0, 1.0)
        qs = np.linspace(0.05, 0.95, 30)
        ratios = qs / tangency_low(qs, report)
        assert np.all(np.diff(ratios) > 0.0)

    def test_loci_vanish_at_origin(self):
        report = classify_crossing(5.0, 1.0)
        assert tangency_low(1e-12, report) < 1e-11

    def test_loci_unavailable_single(self):
        report = classify_crossing(1.0, 2.0)
        with pytest.raises(RegimeError):
            tangency_low(0.5, report)


class TestMrs:
    def test_uninformative_slope(self):
        for model in (LlrCost(1, 1), ShannonCost(1.0)):
            assert mrs(UNINFORMATIVE, 0.5, model) == pytest.approx(-1.0, abs=1e-15)

    def test_near_diagonal_matches_costless(self):
        pi = Experiment(0.500001, 0.5)
        assert mrs(pi, 0.5, LlrCost(1, 1)) == pytest.approx(-1.0, abs=1e-4)
        assert mrs(pi, 0.5, ShannonCost(1.0)) == pytest.approx(-1.0, abs=1e-4)

    def test_boundary_raises(self):
        with pytest.raises(ValueError):
            mrs(Experiment(1.0, 0.3), 0.5, LlrCost(1, 1))
        with pytest.raises(ValueError):
            mrs(Experiment(0.7, 0.0), 0.5, LlrCost(1, 1))

    def test_matches_finite_differences_llr(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            p, q = draw_interior_experiment(rng)
            mu = rng.uniform(0.1, 0.9)
            cg, cb = rng.uniform(0.2, 6.0, size=2)
            model = LlrCost(float(cg), float(cb))
            assert mrs(Experiment(p, q), mu, model) == pytest.approx(
                payoff_fd_mrs(p, q, mu, model), abs=1e-6, rel=1e-6)

    def test_matches_finite_differences_shannon(self):
        rng = np.random.default_rng(22)
        for _ in range(200):
            p, q = draw_interior_experiment(rng)
            mu = rng.uniform(0.1, 0.9)
            model = ShannonCost(float(rng.uniform(0.2, 4.0)))
            assert mrs(Experiment(p, q), mu, model) == pytest.approx(
                payoff_fd_mrs(p, q, mu, model), abs=1e-6, rel=1e-6)

    def test_specific_instance_against_oracle(self):
        model = LlrCost(2.0, 1.0)
        assert mrs(Experiment(0.7, 0.3), 0.4, model) == pytest.approx(
            payoff_fd_mrs(0.7, 0.3, 0.4, model), abs=1e-6)


class TestPriorTrend:
    def test_zero_on_loci(self):
        report = classify_crossing(5.0, 1.0)
        for q in (0.2, 0.5, 0.8):
            for locus in (tangency_low, tangency_high):
                pi = Experiment(locus(q, report), q)
                assert mrs_prior_trend(pi, 5.0, 1.0) == 0

    def test_positive_between_loci(self):
        report = classify_crossing(5.0, 1.0)
        q = 0.4
        p_mid = 0.5 * (tangency_low(q, report) + tangency_high(q, report))
        assert mrs_prior_trend(Experiment(p_mid, q), 5.0, 1.0) == 1

    def test_negative_outside_loci(self):
        report = classify_crossing(5.0, 1.0)
        q = 0.4
        assert mrs_prior_trend(
            Experiment(0.5 * (q + tangency_low(q, report)), q), 5.0, 1.0) == -1
        assert mrs_prior_trend(
            Experiment(0.5 * (1.0 + tangency_high(q, report)), q), 5.0, 1.0) == -1

    def test_always_negative_when_good_news_cheap(self):
        rng = np.random.default_rng(23)
        for _ in range(200):
            p, q = draw_interior_experiment(rng)
            cb = rng.uniform(0.2, 5.0)
            cg = cb * rng.uniform(0.1, 1.0)
            assert mrs_prior_trend(Experiment(p, q), float(cg), float(cb)) == -1

    def test_sign_matches_finite_differences(self):
        rng = np.random.default_rng(24)
        for _ in range(300):
            p, q = draw_interior_experiment(rng)
            cg, cb = rng.uniform(0.1, 5.0, size=2)
            model = LlrCost(float(cg), float(cb))
            disc = crossing_discriminant(experiment_odds(p, q), cg, cb)
            if abs(disc) < 1e-4:
                continue  # within the finite-difference noise floor
            fd = mrs_mu_fd(p, q, 0.5, model)
            assert (fd > 0) == (mrs_prior_trend(Experiment(p, q), cg, cb) > 0)


class TestShannonLoci:
    def test_peak_locus_hand_value(self):
        assert shannon_peak_locus(0.5, 1.0) == pytest.approx(
            1.0 / (1.0 + math.exp(-1.0)), abs=1e-12)

    def test_peak_locus_above_diagonal(self):
        rng = np.random.default_rng(25)
        for _ in range(100):
            q = rng.uniform(0.02, 0.95)
            scale = float(10 ** rng.uniform(-1, 1))
            assert shannon_peak_locus(q, scale) > q

    def test_peak_locus_collapses_for_large_scale(self):
        assert shannon_peak_locus(0.4, 1e6) == pytest.approx(0.4, abs=1e-5)

    def test_mrs_decreasing_below_locus(self):
        rng = np.random.default_rng(26)
        for _ in range(50):
            q = rng.uniform(0.05, 0.8)
            scale = float(rng.uniform(0.3, 3.0))
            p_tilde = shannon_peak_locus(q, scale)
            p = rng.uniform(q + 1e-4, min(p_tilde, 0.999))
            model = ShannonCost(scale)
            grads = [mrs_mu_fd(p, q, mu, model) for mu in (0.1, 0.4, 0.7)]
            assert all(g < 1e-9 for g in grads)

    def test_equal_mrs_locus_above_peak_locus(self):
        rng = np.random.default_rng(27)
        for _ in range(50):
            q = rng.uniform(0.05, 0.8)
            scale = float(rng.uniform(0.3, 3.0))
            mu_lo = rng.uniform(0.05, 0.6)
            mu_hi = rng.uniform(mu_lo + 0.05, 0.95)
            p_pair = shannon_equal_mrs_locus(q, scale, mu_lo, mu_hi)
            assert p_pair > shannon_peak_locus(q, scale)

    def test_equal_mrs_locus_sign_flip(self):
        q, scale, mu_lo, mu_hi = 0.3, 1.0, 0.3, 0.6
        p_pair = shannon_equal_mrs_locus(q, scale, mu_lo, mu_hi)
        model = ShannonCost(scale)
        below = (mrs(Experiment(p_pair - 1e-4, q), mu_lo, model)
                 - mrs(Experiment(p_pair - 1e-4, q), mu_hi, model))
        above = (mrs(Experiment(p_pair + 1e-4, q), mu_lo, model)
                 - mrs(Experiment(p_pair + 1e-4, q), mu_hi, model))
        assert below > 0.0 > above

    def test_equal_types_rejected(self):
        with pytest.raises(ValueError):
            shannon_equal_mrs_locus(0.3, 1.0, 0.4, 0.4)


class TestCurveTracing:
    def test_traced_curve_holds_level(self):
        from costly_persuasion import sender_payoff
        model = LlrCost(2.0, 1.0)
        start = Experiment(0.5, 0.2)
        level = sender_payoff(start, 0.4, model)
        ps, qs = trace_indifference(start, 0.4, model, p_stop=0.8)
        assert len(ps) > 100
        drift = abs(sender_payoff(Experiment(ps[-1], qs[-1]), 0.4, model) - level)
        assert drift < 1e-8

    def test_triple_crossing_curves_recross(self):
        # Two priors' curves through a point strictly between the loci meet
        # at least twice more.
        rng = np.random.default_rng(28)
        model = LlrCost(5.0, 1.0)
        report = classify_crossing(5.0, 1.0)
        found = 0
        attempts = 0
        while found < 10 and attempts < 60:
            attempts += 1
            q = rng.uniform(0.15, 0.5)
            lo, hi = tangency_low(q, report), tangency_high(q, report)
            p = rng.uniform(lo + 0.1 * (hi - lo), hi - 0.1 * (hi - lo))
            mu_a, mu_b = 0.3, 0.5
            crossings = indifference_level_crossings(
                Experiment(p, q), mu_a, mu_b, model)
            if crossings >= 2:
                found += 1
        assert found >= 10
