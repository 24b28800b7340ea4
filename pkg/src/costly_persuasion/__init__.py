"""Equilibria of costly binary-experiment persuasion with a partially informed sender.

A numerical toolkit for the signaling game in which a privately informed
sender runs a public binary experiment at a belief-dependent cost and a
threshold receiver acts on the outcome. The package classifies the
single-crossing regime of the cost parameters, solves the pooling,
separating, and uninformative outcomes selected by the D1 criterion,
verifies arbitrary strategy profiles by brute-force grid search, and
validates the sequential-sampling microfoundation of the cost by Monte
Carlo.
"""

from .benchmark import (BenchmarkSolution, SlopeComponents, feasibility,
                        slope_components, solve_benchmark)
from .costs import (cost, kl_bernoulli, llr_potential, sender_payoff,
                    shannon_potential)
from .crossing import (CrossingReport, Regime, boundary_aux, classify_crossing,
                       crossing_discriminant, experiment_odds, mrs,
                       mrs_prior_trend, shannon_equal_mrs_locus,
                       shannon_peak_locus, single_crossing_bound, tangency_high,
                       tangency_low, trace_indifference)
from .equilibria import (BlackwellEntry, PoolingSet, SeparatingOutcome,
                         UninformativeReport, blackwell_report,
                         large_deviation_bound, second_crossing_p,
                         solve_pooling, solve_separating, solve_uninformative,
                         zero_payoff_experiment, zero_payoff_q_bad,
                         zero_payoff_q_good)
from .errors import (BracketError, ConfigError, NoIntersectionError,
                     RegimeError, UndefinedPosteriorError)
from .game import (BeliefState, Blackwell, CostModel, Experiment, GameConfig,
                   LlrCost, SenderType, ShannonCost, UNINFORMATIVE,
                   blackwell_compare, is_persuasive, odds_ratio,
                   odds_ratio_inv, posterior, validate_config)
from .verifier import (BeliefSystem, GridSpec, OffPathRule, StrategyProfile,
                       VerifierReport, Violation, ViolationKind, belief_grid,
                       deviation_sets, equilibrium_payoffs, on_path_beliefs,
                       sender_value_given_belief, verify_d1)
from .wald import (SimStats, WaldConfig, closed_form_cost,
                   closed_form_cost_by_state, equivalent_llr_cost,
                   map_to_llr_constants, posterior_thresholds, simulate,
                   thresholds_to_experiment)

__version__ = "0.1.0"
