"""Variable depth search and neighboring metaheuristics on bit-coded
function minimization benchmarks, plus the trial harness that compares
them."""

from .encoding import (
    BitVector,
    EncodingSpec,
    Move,
    apply_move,
    binary_to_gray,
    bit_flip,
    decode_coefficient,
    decode_solution,
    gain,
    gray_to_binary,
    int_step,
)
from .harness import (
    ALGORITHMS,
    FUNCTIONS,
    RankTable,
    RunConfig,
    TrialStats,
    emit_report,
    rank_table,
    run_trials,
    surface_grid,
)
from .local_search import (
    DEFAULT_BUDGET,
    PassTrace,
    SearchResult,
    SearchState,
    best_prefix,
    best_unlocked_move,
    hill_climb,
    kls,
    kls1,
    kls2,
    kls_pass,
    random_initial,
    random_integer_state,
)
from .objectives import OBJECTIVES, Objective, get_objective
from .rng import RngStream, derive_stream
from .stochastic import (
    GAParams,
    Population,
    SAParams,
    ga_fitness,
    ga_generation,
    genetic_algorithm,
    initial_temperature,
    sa_accept,
    simulated_annealing,
)

__version__ = "0.1.0"
