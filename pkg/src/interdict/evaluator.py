"""Ground-truth interception semantics, defender utility, and the exact oracle.

A defender schedule is a sequence of (node, t_in, t_out) occupations; travel
between consecutive nodes takes shortest-path time.  An attacker state (v, t)
is intercepted by a defender state (v', t_in, t_out) when v == v' and
t_in <= t <= t_out (closed interval on both ends).  The defender utility of a
schedule set against a mixed strategy is the total probability mass of the
pure strategies it intercepts.

The oracle enumerates every feasible schedule (integer waits at any node,
shortest-path travel, horizon t_max, at most t_max + 1 states) and returns the
exact optimum.  Its feasible set is a superset of what the layered-graph
planner can express (the planner may only wait at exits), so the planner's
utility never exceeds the oracle's.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .network import DistanceMatrix, Network, all_pairs_shortest
from .strategies import AttackerStrategy, MixedStrategy
from .timexp import LayeredNode

DEFAULT_ORACLE_CAP = 10_000_000


class ScheduleError(ValueError):
    """Raised when a defender schedule violates its invariants."""


class CapExceededError(RuntimeError):
    """Oracle enumeration would exceed the configured cap."""

    def __init__(self, estimate: int, cap: int):
        super().__init__(f"oracle enumeration size {estimate} exceeds cap {cap}")
        self.estimate = estimate
        self.cap = cap


@dataclass(frozen=True)
class DefenderSchedule:
    """Ordered (node, t_in, t_out) occupations; empty means "no schedule"."""

    states: tuple[tuple[int, int, int], ...]

    def compact(self) -> str:
        return ", ".join(f"({v},{ti},{to})" for v, ti, to in self.states)


def validate_schedule(
    net: Network,
    dm: DistanceMatrix,
    sched: DefenderSchedule,
    start: int | None = None,
) -> None:
    """Check schedule invariants; travel gaps may exceed the shortest-path
    time (a slower road is legal) but never undercut it."""
    if not sched.states:
        raise ScheduleError("schedule has no states")
    for i, (v, t_in, t_out) in enumerate(sched.states):
        if v not in net.adjacency:
            raise ScheduleError(f"state {i}: unknown node {v}")
        if not (0 <= t_in <= t_out <= net.t_max):
            raise ScheduleError(
                f"state {i}: interval [{t_in}, {t_out}] outside 0 <= t_in <= t_out <= {net.t_max}"
            )
    first_v, first_in, _ = sched.states[0]
    if first_in != 0:
        raise ScheduleError(f"state 0: schedule must start at time 0, got {first_in}")
    if start is not None and first_v != start:
        raise ScheduleError(f"state 0: schedule starts at {first_v}, expected {start}")
    for i in range(len(sched.states) - 1):
        u, _, t_out = sched.states[i]
        v, t_in, _ = sched.states[i + 1]
        travel = dm.travel_time(u, v)
        if t_in < t_out + travel:
            raise ScheduleError(
                f"state {i + 1}: arrives at {t_in} but leaving {u} at {t_out} "
                f"needs at least {travel} travel time to {v}"
            )


def collapse_path(path: Sequence[LayeredNode]) -> DefenderSchedule:
    """Collapse a layered path into occupation intervals.

    Consecutive copies of the same node (a wait-chain traversal) merge into a
    single state spanning the first and last layer; every other visit becomes
    a point occupation (v, t, t).  Non-contiguous repeat visits stay separate.
    """
    states: list[tuple[int, int, int]] = []
    for node in path:
        if states and states[-1][0] == node.v:
            v, t_in, _ = states[-1]
            states[-1] = (v, t_in, node.t)
        else:
            states.append((node.v, node.t, node.t))
    return DefenderSchedule(states=tuple(states))


def intercepts(sched: DefenderSchedule, strat: AttackerStrategy) -> bool:
    """True iff some defender state covers some attacker state (closed bounds)."""
    for v, t_in, t_out in sched.states:
        for av, at in strat.states:
            if av == v and t_in <= at <= t_out:
                return True
    return False


def intercepted_mass(
    scheds: Iterable[DefenderSchedule],
    pairs: Iterable[tuple[AttackerStrategy, float]],
) -> float:
    """Probability mass of the pure strategies intercepted by any schedule."""
    scheds = list(scheds)
    total = 0.0
    for strat, prob in pairs:
        if any(intercepts(s, strat) for s in scheds):
            total += prob
    return total


def utility(scheds: Iterable[DefenderSchedule], mix: MixedStrategy) -> float:
    """Defender utility: expected interception probability under the mix."""
    return intercepted_mass(scheds, mix.items())


def _move_table(net: Network, dm: DistanceMatrix) -> dict[int, tuple[tuple[int, int], ...]]:
    moves: dict[int, tuple[tuple[int, int], ...]] = {}
    for v in sorted(net.nodes):
        out = []
        for u in sorted(net.nodes):
            if u == v:
                continue
            d = dm.travel_time(v, u)
            if d != float("inf") and d <= net.t_max:
                out.append((u, int(d)))
        moves[v] = tuple(out)
    return moves


def count_defender_schedules(net: Network, dm: DistanceMatrix, start: int) -> int:
    """Exact size of the oracle's schedule space for one defender."""
    moves = _move_table(net, dm)
    t_max = net.t_max
    max_states = t_max + 1

    @lru_cache(maxsize=None)
    def count(v: int, t: int, used: int) -> int:
        total = 1  # close the schedule by waiting here until t_max
        if used < max_states:
            for u, d in moves[v]:
                for k in range(0, t_max - t - d + 1):
                    total += count(u, t + k + d, used + 1)
        return total

    return count(start, 0, 1)


@dataclass(frozen=True)
class OracleResult:
    utility: float
    schedules: tuple[DefenderSchedule, ...]
    enumerated: int


def oracle_best(
    net: Network,
    mix: MixedStrategy,
    m: int = 1,
    cap: int = DEFAULT_ORACLE_CAP,
) -> OracleResult:
    """Exhaustive optimum over joint defender schedules.

    Schedules are enumerated per defender, reduced to interception bitmasks
    over the pure strategies, and joined exactly across defenders, so the
    result equals full joint enumeration at a fraction of the work.  Refuses
    (CapExceededError) when the schedule space exceeds `cap` rather than
    silently sampling.
    """
    if m < 1:
        raise ValueError(f"defender count must be >= 1, got {m}")
    if m > len(net.police):
        raise ValueError(f"{m} defenders requested but only {len(net.police)} starts listed")
    dm = all_pairs_shortest(net)
    starts = net.police[:m]
    estimate = sum(count_defender_schedules(net, dm, s) for s in starts)
    if estimate > cap:
        raise CapExceededError(estimate, cap)

    t_max = net.t_max
    max_states = t_max + 1
    moves = _move_table(net, dm)
    # (node, time) -> bitmask of strategies with an attacker state there
    state_bits: dict[tuple[int, int], int] = {}
    for idx, strat in enumerate(mix.strategies):
        for v, t in strat.states:
            state_bits[(v, t)] = state_bits.get((v, t), 0) | (1 << idx)

    def hits(v: int, lo: int, hi: int) -> int:
        mask = 0
        for t in range(lo, hi + 1):
            mask |= state_bits.get((v, t), 0)
        return mask

    def enumerate_masks(start: int) -> tuple[dict[int, DefenderSchedule], int]:
        masks: dict[int, DefenderSchedule] = {}
        enumerated = 0

        def record(mask: int, states: tuple[tuple[int, int, int], ...]) -> None:
            if mask not in masks:
                masks[mask] = DefenderSchedule(states=states)

        def recurse(v: int, t_arr: int, used: int, mask: int, states: tuple) -> None:
            nonlocal enumerated
            enumerated += 1
            record(mask | hits(v, t_arr, t_max), states + ((v, t_arr, t_max),))
            if used < max_states:
                for u, d in moves[v]:
                    for k in range(0, t_max - t_arr - d + 1):
                        recurse(
                            u,
                            t_arr + k + d,
                            used + 1,
                            mask | hits(v, t_arr, t_arr + k),
                            states + ((v, t_arr, t_arr + k),),
                        )

        recurse(start, 0, 1, 0, ())
        return masks, enumerated

    per_defender: list[dict[int, DefenderSchedule]] = []
    enumerated_total = 0
    for s in starts:
        masks, n = enumerate_masks(s)
        per_defender.append(masks)
        enumerated_total += n

    probs = mix.probs
    best_utility = -1.0
    best_combo: tuple[DefenderSchedule, ...] = ()
    for combo in itertools.product(*(list(d.items()) for d in per_defender)):
        joint = 0
        for mask, _ in combo:
            joint |= mask
        value = sum(p for i, p in enumerate(probs) if joint & (1 << i))
        if value > best_utility:
            best_utility = value
            best_combo = tuple(sched for _, sched in combo)
    return OracleResult(
        utility=best_utility,
        schedules=best_combo,
        enumerated=enumerated_total,
    )
