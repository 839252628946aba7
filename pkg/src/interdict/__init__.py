"""Defender interdiction planning on time-expanded road networks.

Given a road network and a known mixed set of timed attacker escape paths,
this package builds a time-expanded multi-layer graph, scores its nodes with
exact/heuristic interception mass, and extracts a near-optimal defender
schedule by Dijkstra over derived edge weights.  A brute-force oracle and an
exported MILP benchmark model verify the plans.
"""

from .evaluator import (
    CapExceededError,
    DefenderSchedule,
    OracleResult,
    ScheduleError,
    collapse_path,
    intercepts,
    oracle_best,
    utility,
    validate_schedule,
)
from .milp import MilpModel, MilpError, SolutionError, build_milp, emit_lp, parse_solution
from .network import (
    DistanceMatrix,
    Network,
    NetworkError,
    UNREACHABLE,
    all_pairs_shortest,
    parse_network,
    serialize_network,
)
from .planner import (
    BLOCKED,
    CostTable,
    MultiPlanResult,
    NoPathError,
    PlanResult,
    assign_weights,
    build_cost_table,
    compute_exact_costs,
    compute_heuristics,
    plan_defender,
    plan_multi,
)
from .strategies import (
    AttackerStrategy,
    MixedStrategy,
    StrategyError,
    count_escape_paths,
    generate_strategies,
    parse_strategies,
    serialize_strategies,
    validate_strategy,
)
from .timexp import LayeredNetwork, LayeredNode, build_layered, export_dot

__version__ = "0.1.0"

__all__ = [
    "AttackerStrategy",
    "BLOCKED",
    "CapExceededError",
    "CostTable",
    "DefenderSchedule",
    "DistanceMatrix",
    "LayeredNetwork",
    "LayeredNode",
    "MilpError",
    "MilpModel",
    "MixedStrategy",
    "MultiPlanResult",
    "Network",
    "NetworkError",
    "NoPathError",
    "OracleResult",
    "PlanResult",
    "ScheduleError",
    "SolutionError",
    "StrategyError",
    "UNREACHABLE",
    "all_pairs_shortest",
    "assign_weights",
    "build_cost_table",
    "build_layered",
    "build_milp",
    "collapse_path",
    "compute_exact_costs",
    "compute_heuristics",
    "count_escape_paths",
    "emit_lp",
    "export_dot",
    "generate_strategies",
    "intercepts",
    "oracle_best",
    "parse_network",
    "parse_solution",
    "parse_strategies",
    "plan_defender",
    "plan_multi",
    "serialize_network",
    "serialize_strategies",
    "utility",
    "validate_schedule",
    "validate_strategy",
]
