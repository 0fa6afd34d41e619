"""Minimum and maximum selection against a comparison oracle that may lie
at most k times, with instrumentation to check the comparison-count bounds."""

from .algorithms import (
    BudgetViolation,
    GroupPlan,
    GroupReport,
    MinMaxResult,
    find_max_k_lies,
    find_min_k_lies,
    improved_minmax,
    make_group_plan,
    pohl_minmax,
    simple_minmax,
)
from .config import DEFAULT, CalibratedConstants, dump_constants, load_constants
from .core import (
    Answer,
    InvalidQuery,
    LieBudgetViolation,
    QueryRecord,
    RunStats,
    TotalOrder,
    Transcript,
    assert_lie_budget,
    count_lies,
    truth_compare,
)
from .graphs import (
    DegreeBoundExceeded,
    FlowNetwork,
    OrderedMultigraph,
    added_edge_pairs,
    brute_force_min_cut,
    build_flow_network,
    complete_edges,
    flow_completion,
    infinite_capacity,
    max_flow_integral,
    min_split_cut,
)
from .harness import (
    ExperimentConfig,
    ExperimentRow,
    calibrate,
    flow_selftest,
    measure_thickness,
    rows_to_csv,
    run_experiments,
    simple_comparison_bound,
    verify_exhaustive,
)
from .oracles import (
    AdaptiveAdversary,
    AnswersExhausted,
    RandomLiarOracle,
    ScriptedOracle,
    TriggeredLiarOracle,
    TruthfulOracle,
    adversary_consistent_orders,
)
from .sorters import (
    SortBudget,
    SortInconsistency,
    SortOutcome,
    balanced_quicksort,
    median_select,
    mergesort,
    thickness_of_run,
)

__version__ = "0.1.0"
