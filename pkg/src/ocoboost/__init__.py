"""Boosting weak learners through online convex optimization."""

from ocoboost.boost_online import (
    OnlineBooster,
    OnlineBoosterConfig,
    RegretTrace,
    data_stream_id,
    run_online,
)
from ocoboost.boost_stat import (
    Ensemble,
    StatBoostResult,
    agnostic_floor,
    realizable_floor,
    stat_boost,
)
from ocoboost.core import (
    ConfigurationError,
    ContractViolationError,
    ExpertPool,
    Hypothesis,
    InvalidInputError,
    LabeledExample,
    LabeledSequence,
    ProtocolError,
    RngStream,
    UnsupportedSizeError,
    best_in_hindsight,
    constant_hypothesis,
    correlation,
    threshold_stump,
    vote_expectation,
    vote_project,
)
from ocoboost.games import (
    MatrixGame,
    certify_solution,
    exact_best_response,
    game_value_grid,
    load_matrix,
    noisy_best_response,
    solve_improper_game,
    two_row_game,
)
from ocoboost.harness import (
    AdversarySpec,
    ExperimentReport,
    draw_stat_sample,
    generate_sequence,
    parse_adversary,
    run_online_experiment,
    run_stat_experiment,
    signed_threshold_pool,
    write_online_csv,
    write_stat_csv,
)
from ocoboost.oco import (
    BoxDomain,
    LinearLoss,
    OcoState,
    best_fixed_point,
    interval,
    oco_new,
    oco_next,
    oco_update,
    ogd_regret_bound,
)
from ocoboost.weaklearn import (
    HedgeLearner,
    HedgeSpec,
    PrescientOracle,
    PrescientSpec,
    StumpErmLearner,
    declared_epsilon0,
    hedge_declared_regret,
)

__version__ = "0.1.0"
