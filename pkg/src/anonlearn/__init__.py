"""anonlearn: learning dynamics in large anonymous games.

Finite-action games whose payoffs depend only on an agent's own action and
the population's action distribution, plus the machinery to study how simple
payoff-driven learners behave in them: best-reply dynamics, stage-based
epsilon-greedy learners, payoff-only regret matching, mean-field and
random-matching payoff realization, churn, and a deterministic experiment
engine with a CLI.
"""

from .core import (
    NORM_TOL,
    ActionDistribution,
    ActionSet,
    AnonymousGame,
    DimensionError,
    MixedAction,
    PayoffDistribution,
    PayoffSet,
    as_strategy_vector,
    estimate_lipschitz,
    l1_distance,
    matching_utility,
    utility,
)
from .dynamics import (
    BestReplySequence,
    CloseWitness,
    abr_containment_threshold,
    best_reply_set,
    br_sequence,
    br_step,
    close_l1_bound,
    is_eta_nash,
    mixed_profile_distribution,
    pure_profile_distribution,
    verify_close,
)
from .games import (
    CONTRIBUTION_LEVELS,
    MODES,
    ContributionGame,
    MatrixGame,
    builtin_matrix,
    climbing_game,
    contribution_cost,
    contribution_utility,
    load_matrix,
    prisoners_dilemma,
)
from .learners import (
    ContractError,
    FixedAgent,
    RegretMatcher,
    StageLearner,
    sample_mixed,
)
from .engine import (
    Population,
    RunConfig,
    RunTrace,
    apply_churn,
    best_reply_fraction,
    build_game,
    build_population,
    distance_from_equilibrium,
    measure_stage_rho,
    realize_matching,
    realize_meanfield,
    run,
    run_many,
    run_stationary,
    sweep_seeds,
)
from .config import ConfigError, ExperimentSpec, load_experiment, parse_config_text

__version__ = "0.1.0"

__all__ = [
    "NORM_TOL",
    "ActionDistribution",
    "ActionSet",
    "AnonymousGame",
    "BestReplySequence",
    "CloseWitness",
    "ConfigError",
    "ContractError",
    "CONTRIBUTION_LEVELS",
    "ContributionGame",
    "DimensionError",
    "ExperimentSpec",
    "FixedAgent",
    "MODES",
    "MatrixGame",
    "MixedAction",
    "PayoffDistribution",
    "PayoffSet",
    "Population",
    "RegretMatcher",
    "RunConfig",
    "RunTrace",
    "StageLearner",
    "abr_containment_threshold",
    "apply_churn",
    "as_strategy_vector",
    "best_reply_fraction",
    "best_reply_set",
    "br_sequence",
    "br_step",
    "build_game",
    "build_population",
    "builtin_matrix",
    "climbing_game",
    "close_l1_bound",
    "contribution_cost",
    "contribution_utility",
    "distance_from_equilibrium",
    "estimate_lipschitz",
    "is_eta_nash",
    "l1_distance",
    "load_experiment",
    "load_matrix",
    "matching_utility",
    "measure_stage_rho",
    "mixed_profile_distribution",
    "parse_config_text",
    "prisoners_dilemma",
    "pure_profile_distribution",
    "realize_matching",
    "realize_meanfield",
    "run",
    "run_many",
    "run_stationary",
    "sample_mixed",
    "sweep_seeds",
    "utility",
    "verify_close",
]
