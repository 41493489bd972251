"""Soft equality/difference constraint toolkit.

Exact cost evaluation for the pairwise equality/difference family, domain
filtering propagators, an interval dynamic program with crest preprocessing,
a linear-time greedy half-approximation, matching-based and value-order
exact solvers, exhaustive oracles, and a similarity network over solution
copies.
"""

from .diversity import (
    MultiInstance,
    MultiOutcome,
    check_berge_acyclic,
    column_disequality_sum,
    hamming,
    parse_multi_instance,
    propagate_cn_sim,
    sum_pairwise_distance,
)
from .greedy import GreedyResult, GreedyState, TieBreak, greedy_max_equalities, report_objective
from .intervaldp import (
    DPTable,
    build_table,
    count_enclosing,
    max_equalities_dp,
    rc_filter_graph_min,
)
from .matching import max_matching, matching_edges
from .model import (
    Assignment,
    BudgetError,
    ContiguityError,
    CostBounds,
    CostReport,
    Domain,
    Instance,
    ParseError,
    PreconditionError,
    SofteqError,
    count_multiplicities,
    evaluate,
    pair_count,
    parse_instance,
)
from .occurrence import (
    CrestPartition,
    DeltaList,
    InverseOcc,
    build_delta,
    crest_partition,
    inverse_occurrence,
    reduce_by_crests,
    value_occurrences,
)
from .oracle import (
    BruteForceResult,
    CostKind,
    ThreeDMInstance,
    brute_force_3dm,
    brute_force_optimum,
    brute_force_supports,
    enumeration_size,
    parse_3dm,
    reduce_3dm,
)
from .solvers import (
    IntersectionGraph,
    ValueClassification,
    ValueOrder,
    classify_values,
    induced_solution,
    solve_fpt_conflicting,
    solve_fpt_values,
    solve_heavy_class,
    solve_matching_class,
)
from .varmin import Mode, PropagationOutcome, Status, max_shared_occurrence, propagate_var_min

__version__ = "0.1.0"
