"""Attacker strategies: timed escape paths, mixed sets, generation, and I/O.

A pure strategy is a sequence of (node, time) states that starts at the crime
node at time 0, hops along single road edges (the hop duration must equal the
edge length), and ends at an exit node no later than t_max.  A mixed strategy
attaches a probability to each pure strategy; the probabilities sum to one.

Strategy file format (JSON):

    {"strategies": [[[v, t], [v, t], ...], ...], "probs": [p0, p1, ...]}
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .network import Network

PROB_TOLERANCE = 1e-9

_STRATEGY_KEYS = ("strategies", "probs")


class StrategyError(ValueError):
    """Raised for invalid strategies, bad files, or infeasible generation."""


@dataclass(frozen=True)
class AttackerStrategy:
    """One timed escape path as an ordered tuple of (node, time) states."""

    states: tuple[tuple[int, int], ...]

    def compact(self) -> str:
        """Human form in "t_v" notation, e.g. "0_1, 2_3, 4_5"."""
        return ", ".join(f"{t}_{v}" for v, t in self.states)


@dataclass(frozen=True)
class MixedStrategy:
    strategies: tuple[AttackerStrategy, ...]
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.strategies:
            raise StrategyError("mixed strategy has no pure strategies")
        if len(self.strategies) != len(self.probs):
            raise StrategyError(
                f"{len(self.strategies)} strategies but {len(self.probs)} probabilities"
            )
        for i, p in enumerate(self.probs):
            if not (p > 0.0):
                raise StrategyError(f"probability #{i} must be > 0, got {p}")
        total = sum(self.probs)
        if abs(total - 1.0) > PROB_TOLERANCE:
            raise StrategyError(f"probabilities sum to {total!r}, expected 1 within 1e-9")
        if len(set(self.strategies)) != len(self.strategies):
            raise StrategyError("duplicate pure strategies in mixed strategy")

    def items(self) -> tuple[tuple[AttackerStrategy, float], ...]:
        return tuple(zip(self.strategies, self.probs))


def validate_strategy(net: Network, strat: AttackerStrategy) -> None:
    """Check every pure-strategy invariant; raise StrategyError naming the
    first violated rule and the state index where it occurs."""
    states = strat.states
    if not states:
        raise StrategyError("strategy has no states")
    for i, state in enumerate(states):
        if len(state) != 2:
            raise StrategyError(f"state {i}: expected (node, time) pair, got {state!r}")
        v, t = state
        if v not in net.adjacency:
            raise StrategyError(f"state {i}: unknown node {v}")
        if not isinstance(t, int) or isinstance(t, bool):
            raise StrategyError(f"state {i}: time must be an integer, got {t!r}")
    if states[0] != (net.crime, 0):
        raise StrategyError(
            f"state 0: strategy must start at the crime node ({net.crime}, 0), got {states[0]}"
        )
    last_v, last_t = states[-1]
    if last_v not in net.exit_set:
        raise StrategyError(f"state {len(states) - 1}: last state node {last_v} is not an exit")
    if last_t > net.t_max:
        raise StrategyError(
            f"state {len(states) - 1}: exit time {last_t} exceeds horizon {net.t_max}"
        )
    edge_lengths = {(s, d): w for s, d, w in net.edges}
    for i in range(len(states) - 1):
        (u, t1), (v, t2) = states[i], states[i + 1]
        if t2 <= t1:
            raise StrategyError(f"state {i + 1}: times must strictly increase ({t1} -> {t2})")
        length = edge_lengths.get((u, v))
        if length is None:
            raise StrategyError(f"state {i + 1}: no edge ({u}, {v}) in the network")
        if t2 - t1 != length:
            raise StrategyError(
                f"state {i + 1}: hop duration {t2 - t1} != edge length {length} for edge ({u}, {v})"
            )


def count_escape_paths(net: Network) -> int:
    """Number of distinct timed crime-to-exit paths within the horizon.

    Exits are absorbing: a path ends the first time it touches an exit node.
    """
    memo: dict[tuple[int, int], int] = {}

    def walk(v: int, t: int) -> int:
        if v in net.exit_set:
            return 1
        key = (v, t)
        if key not in memo:
            total = 0
            for dst, length in net.adjacency[v]:
                if t + length <= net.t_max:
                    total += walk(dst, t + length)
            memo[key] = total
        return memo[key]

    return walk(net.crime, 0)


def _uniform_simplex(rng: random.Random, count: int) -> tuple[float, ...]:
    """Uniform sample from the probability simplex via sorted-spacings."""
    if count == 1:
        return (1.0,)
    cuts = sorted(rng.random() for _ in range(count - 1))
    points = [0.0] + cuts + [1.0]
    return tuple(points[i + 1] - points[i] for i in range(count))


def generate_strategies(net: Network, count: int, seed: int) -> MixedStrategy:
    """Sample `count` distinct escape paths by seeded random walks.

    Walks move along edges that still fit in the remaining time budget and
    stop at the first exit reached; duplicates are rejected and resampled.
    Deterministic for identical (net, count, seed).
    """
    if count < 1:
        raise StrategyError(f"count must be >= 1, got {count}")
    available = count_escape_paths(net)
    if available == 0:
        raise StrategyError("network has no crime-to-exit path within the horizon")
    if available < count:
        raise StrategyError(
            f"requested {count} distinct strategies but only {available} timed paths exist"
        )
    rng = random.Random(seed)
    chosen: list[tuple[tuple[int, int], ...]] = []
    seen: set[tuple[tuple[int, int], ...]] = set()
    attempts = 0
    max_attempts = 10_000 + 200 * count
    while len(chosen) < count:
        attempts += 1
        if attempts > max_attempts:
            raise StrategyError(f"random walk sampling stalled after {attempts} attempts")
        states = [(net.crime, 0)]
        while True:
            v, t = states[-1]
            if v in net.exit_set:
                break
            options = [(dst, length) for dst, length in net.adjacency[v] if t + length <= net.t_max]
            if not options:
                states = []  # dead end; retry the walk
                break
            dst, length = rng.choice(options)
            states.append((dst, t + length))
        if not states:
            continue
        key = tuple(states)
        if key in seen:
            continue
        seen.add(key)
        chosen.append(key)
    probs = _uniform_simplex(rng, count)
    mix = MixedStrategy(
        strategies=tuple(AttackerStrategy(states=s) for s in chosen),
        probs=probs,
    )
    for strat in mix.strategies:
        validate_strategy(net, strat)
    return mix


def parse_strategies(text: str, net: Network | None = None) -> MixedStrategy:
    """Parse a strategy file; normalization is enforced on every load, and the
    strategies are validated against `net` when one is given."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StrategyError(
            f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(obj, dict):
        raise StrategyError("strategy file must contain a JSON object")
    unknown = sorted(set(obj) - set(_STRATEGY_KEYS))
    if unknown:
        raise StrategyError(f"unknown keys in strategy file: {', '.join(unknown)}")
    missing = [k for k in _STRATEGY_KEYS if k not in obj]
    if missing:
        raise StrategyError(f"missing keys in strategy file: {', '.join(missing)}")
    if not isinstance(obj["strategies"], list) or not isinstance(obj["probs"], list):
        raise StrategyError("fields 'strategies' and 'probs' must be lists")
    strategies = []
    for i, raw in enumerate(obj["strategies"]):
        if not isinstance(raw, list):
            raise StrategyError(f"strategy #{i} must be a list of [node, time] pairs")
        states = []
        for entry in raw:
            if not isinstance(entry, list) or len(entry) != 2:
                raise StrategyError(f"strategy #{i}: bad state {entry!r}")
            states.append((entry[0], entry[1]))
        strategies.append(AttackerStrategy(states=tuple(states)))
    mix = MixedStrategy(strategies=tuple(strategies), probs=tuple(float(p) for p in obj["probs"]))
    if net is not None:
        for i, strat in enumerate(mix.strategies):
            try:
                validate_strategy(net, strat)
            except StrategyError as exc:
                raise StrategyError(f"strategy #{i}: {exc}") from exc
    return mix


def serialize_strategies(mix: MixedStrategy) -> str:
    """Canonical JSON form; byte-identical for identical mixed strategies."""
    strat_rows = ",\n".join(
        "    " + json.dumps([[v, t] for v, t in s.states]) for s in mix.strategies
    )
    probs = json.dumps(list(mix.probs))
    return f'{{\n  "probs": {probs},\n  "strategies": [\n{strat_rows}\n  ]\n}}\n'
