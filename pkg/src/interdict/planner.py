"""Defender planning on the time-expanded network.

The plan is produced in three passes over the layered DAG:

1. Exact costs.  Each attacker state (n, t) deposits its strategy's
   probability mass on the layered node (n @ t).  Exit copies then accumulate
   forward in time starting at the earliest attacker exit, so an exit copy at
   time t carries all mass that has escaped through it by t.  Nodes that end
   up with zero mass are marked INF ("cannot interdict anything here").

2. Heuristics.  An exit copy at time k (within the accumulation range) gets
   the mass still due to escape after k: g(exit @ t_max) - g(exit @ k).
   Every other node inherits the maximum heuristic among its successors,
   propagated in decreasing layer order; nodes that cannot reach a rewarded
   exit copy keep 0.  Taking the max (not the sum) avoids counting the same
   strategy mass twice when several routes lead to the same future mass.

3. Weights and extraction.  Each node scores f = g + h; every edge into a
   finite-f node weighs max(0, 1 - f), edges into INF nodes are BLOCKED
   (non-traversable).  A Dijkstra run from (start, 0) to the exit copies at
   layer t_max returns the minimum-weight path; its cost P gives the proxy
   utility 1 - P, and the collapsed schedule is scored against the true
   interception semantics for the reported utility.

f can exceed 1 when a node both holds strategy mass and inherits future mass;
the weight clamp at 0 keeps Dijkstra's nonnegativity requirement intact.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

from . import evaluator
from .evaluator import DefenderSchedule, collapse_path
from .network import Network
from .strategies import AttackerStrategy, MixedStrategy, validate_strategy
from .timexp import Edge, LayeredNetwork, LayeredNode

INF = float("inf")

#: weight sentinel for edges into INF-cost nodes; such edges are not traversable
BLOCKED = INF


class NoPathError(RuntimeError):
    """No unblocked path from the defender start to any exit at the horizon."""


@dataclass
class CostTable:
    """Per layered node: exact cost g, heuristic h, f = g + h (INF-absorbing),
    and the earliest time any attacker strategy reaches an exit."""

    g: dict[LayeredNode, float]
    h: dict[LayeredNode, float]
    f: dict[LayeredNode, float]
    earliest_exit_time: int


def _finite_g(costs_g: dict[LayeredNode, float], node: LayeredNode) -> float:
    # INF marks "no accumulated mass"; inside heuristic arithmetic that is 0
    value = costs_g[node]
    return 0.0 if value == INF else value


def _exact_costs_from_pairs(
    layered: LayeredNetwork, pairs: Sequence[tuple[AttackerStrategy, float]]
) -> tuple[dict[LayeredNode, float], int]:
    if not pairs:
        raise ValueError("no attacker strategies: nothing to interdict")
    g = {node: 0.0 for node in layered.nodes}
    exit_set = set(layered.exits)
    earliest = None
    for strat, prob in pairs:
        for v, t in strat.states:
            g[LayeredNode(v, t)] += prob
            if v in exit_set and (earliest is None or t < earliest):
                earliest = t
    if earliest is None:
        raise ValueError("no attacker strategy reaches an exit node")
    for e in layered.exits:
        for i in range(earliest, layered.t_max):
            g[LayeredNode(e, i + 1)] += g[LayeredNode(e, i)]
    for node, value in g.items():
        if value == 0.0:
            g[node] = INF
    return g, earliest


def compute_exact_costs(layered: LayeredNetwork, mix: MixedStrategy) -> CostTable:
    """Pass 1: exact costs and the earliest attacker exit time.

    The returned table has h = 0 everywhere and f mirroring g; call
    compute_heuristics / build_cost_table for the full table.
    """
    g, earliest = _exact_costs_from_pairs(layered, mix.items())
    h = {node: 0.0 for node in layered.nodes}
    return CostTable(g=g, h=h, f=dict(g), earliest_exit_time=earliest)


def compute_heuristics(layered: LayeredNetwork, costs: CostTable) -> dict[LayeredNode, float]:
    """Pass 2: heuristic values for every layered node."""
    t_max = layered.t_max
    earliest = costs.earliest_exit_time
    exit_set = set(layered.exits)
    h = {node: 0.0 for node in layered.nodes}

    def future_exit_mass(e: int, t: int) -> float:
        return _finite_g(costs.g, LayeredNode(e, t_max)) - _finite_g(costs.g, LayeredNode(e, t))

    for e in layered.exits:
        for k in range(earliest, t_max + 1):
            h[LayeredNode(e, k)] = future_exit_mass(e, k)
    # Exit copies keep their closed-form values; propagation never overwrites
    # them, and exit copies before the accumulation range stay at 0.
    for t in range(t_max - 1, -1, -1):
        for v in layered.node_ids:
            if v in exit_set:
                continue
            node = LayeredNode(v, t)
            succ = layered.successors[node]
            if succ:
                h[node] = max(h[m] for m in succ)
    return h


def build_cost_table(layered: LayeredNetwork, mix: MixedStrategy) -> CostTable:
    """All cost passes: exact costs, heuristics, and f = g + h."""
    costs = compute_exact_costs(layered, mix)
    return _finalize(layered, costs)


def _cost_table_from_pairs(
    layered: LayeredNetwork, pairs: Sequence[tuple[AttackerStrategy, float]]
) -> CostTable:
    g, earliest = _exact_costs_from_pairs(layered, pairs)
    costs = CostTable(g=g, h={n: 0.0 for n in layered.nodes}, f=dict(g), earliest_exit_time=earliest)
    return _finalize(layered, costs)


def _finalize(layered: LayeredNetwork, costs: CostTable) -> CostTable:
    costs.h = compute_heuristics(layered, costs)
    costs.f = {
        node: (INF if costs.g[node] == INF else costs.g[node] + costs.h[node])
        for node in layered.nodes
    }
    return costs


def assign_weights(layered: LayeredNetwork, costs: CostTable) -> dict[Edge, float]:
    """Pass 3a: edge weights from target-node f values.

    Finite f gives weight max(0, 1 - f) in [0, 1]; INF f gives BLOCKED.
    """
    weights: dict[Edge, float] = {}
    for edge in layered.edges:
        f = costs.f[edge[1]]
        weights[edge] = BLOCKED if f == INF else max(0.0, 1.0 - f)
    return weights


def _dijkstra(
    layered: LayeredNetwork,
    weights: dict[Edge, float],
    source: LayeredNode,
    targets: Sequence[LayeredNode],
) -> tuple[float, tuple[LayeredNode, ...]] | None:
    """Min-weight path with deterministic tie-breaking.

    Labels are (cost, edge count, path-as-(t, v)-sequence); the heap order
    therefore breaks cost ties by fewer edges, then by lexicographically
    smallest (t, v) sequence.  Paths in the layered DAG never revisit a node
    (time strictly increases), so label order is preserved under extension.
    """
    start_label = (0.0, 0, ((source.t, source.v),))
    heap: list[tuple[float, int, tuple[tuple[int, int], ...]]] = [start_label]
    settled: dict[LayeredNode, tuple[float, int, tuple[tuple[int, int], ...]]] = {}
    while heap:
        cost, nedges, path = heapq.heappop(heap)
        t, v = path[-1]
        node = LayeredNode(v, t)
        if node in settled:
            continue
        settled[node] = (cost, nedges, path)
        for succ in layered.successors[node]:
            if succ in settled:
                continue
            w = weights[(node, succ)]
            if w == BLOCKED:
                continue
            heapq.heappush(heap, (cost + w, nedges + 1, path + ((succ.t, succ.v),)))
    best = None
    for target in targets:
        label = settled.get(target)
        if label is not None and (best is None or label < best):
            best = label
    if best is None:
        return None
    cost, _, path = best
    return cost, tuple(LayeredNode(v, t) for t, v in path)


@dataclass
class PlanResult:
    """One defender's plan plus both utility readings.

    proxy_utility is the Dijkstra-side estimate clamp(1 - P, 0, 1); the
    evaluated utility is the ground-truth interception probability and is
    what acceptance checks compare against.
    """

    layered_path: tuple[LayeredNode, ...]
    schedule: DefenderSchedule
    path_cost: float
    proxy_utility: float
    evaluated_utility: float

    def to_dict(self) -> dict:
        return {
            "layered_path": [n.label for n in self.layered_path],
            "schedule": [list(s) for s in self.schedule.states],
            "path_cost": self.path_cost,
            "proxy_utility": self.proxy_utility,
            "evaluated_utility": self.evaluated_utility,
        }


@dataclass
class MultiPlanResult:
    plans: tuple[PlanResult, ...]
    combined_utility: float

    def to_dict(self) -> dict:
        return {
            "plans": [p.to_dict() for p in self.plans],
            "combined_utility": self.combined_utility,
        }


def _extract_plan(
    layered: LayeredNetwork,
    costs: CostTable,
    start: int,
    pairs: Sequence[tuple[AttackerStrategy, float]],
) -> PlanResult:
    weights = assign_weights(layered, costs)
    source = LayeredNode(start, 0)
    targets = [LayeredNode(e, layered.t_max) for e in layered.exits]
    found = _dijkstra(layered, weights, source, targets)
    if found is None:
        raise NoPathError(
            f"no unblocked path from ({start}, 0) to an exit at layer {layered.t_max}"
        )
    cost, path = found
    schedule = collapse_path(path)
    return PlanResult(
        layered_path=path,
        schedule=schedule,
        path_cost=cost,
        proxy_utility=min(1.0, max(0.0, 1.0 - cost)),
        evaluated_utility=evaluator.intercepted_mass([schedule], pairs),
    )


def plan_defender(
    net: Network,
    layered: LayeredNetwork,
    mix: MixedStrategy,
    start: int | None = None,
) -> PlanResult:
    """Plan a single defender from `start` (default: first police start).

    Raises NoPathError when every route to the horizon exits is blocked.
    """
    if start is None:
        start = net.police[0]
    if start not in net.police:
        raise ValueError(f"start {start} is not a police start node")
    for strat in mix.strategies:
        validate_strategy(net, strat)
    costs = build_cost_table(layered, mix)
    return _extract_plan(layered, costs, start, mix.items())


def plan_multi(
    net: Network,
    layered: LayeredNetwork,
    mix: MixedStrategy,
    starts: Sequence[int] | None = None,
) -> MultiPlanResult:
    """Greedy sequential planning for several defenders.

    Each defender is planned against the mass not yet intercepted by earlier
    schedules (intercepted strategies drop to probability 0; nothing is
    renormalized).  A defender with no usable path contributes an empty
    schedule.  Each plan's evaluated utility is the mass that defender newly
    intercepts; combined_utility scores the joint schedule set against the
    original mix.
    """
    if starts is None:
        starts = net.police
    if not starts:
        raise ValueError("no defender starts given")
    for s in starts:
        if s not in net.police:
            raise ValueError(f"start {s} is not a police start node")
    for strat in mix.strategies:
        validate_strategy(net, strat)
    residual = [(strat, prob) for strat, prob in mix.items()]
    plans: list[PlanResult] = []
    for start in starts:
        costs = _cost_table_from_pairs(layered, residual)
        try:
            plan = _extract_plan(layered, costs, start, residual)
        except NoPathError:
            plan = PlanResult(
                layered_path=(),
                schedule=DefenderSchedule(states=()),
                path_cost=INF,
                proxy_utility=0.0,
                evaluated_utility=0.0,
            )
        plans.append(plan)
        residual = [
            (strat, 0.0 if evaluator.intercepts(plan.schedule, strat) else prob)
            for strat, prob in residual
        ]
    combined = evaluator.utility([p.schedule for p in plans], mix)
    return MultiPlanResult(plans=tuple(plans), combined_utility=combined)
