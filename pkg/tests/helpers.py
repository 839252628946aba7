"""Shared test utilities: random instances and brute-force reference oracles."""

from __future__ import annotations

import random

from interdict import (
    Network,
    NetworkError,
    MixedStrategy,
    StrategyError,
    all_pairs_shortest,
    count_escape_paths,
    generate_strategies,
)
from interdict.evaluator import count_defender_schedules
from interdict.network import UNREACHABLE


def brute_force_distances(net: Network) -> dict[tuple[int, int], float]:
    """Shortest travel times by exhaustive simple-path enumeration."""
    adjacency = net.adjacency
    best: dict[tuple[int, int], float] = {
        (u, v): (0 if u == v else UNREACHABLE) for u in net.nodes for v in net.nodes
    }

    def explore(origin: int, v: int, cost: int, visited: set[int]) -> None:
        for dst, length in adjacency[v]:
            if dst in visited:
                continue
            total = cost + length
            if total < best[(origin, dst)]:
                best[(origin, dst)] = total
            explore(origin, dst, total, visited | {dst})

    for origin in net.nodes:
        explore(origin, origin, 0, {origin})
    return best


def random_network(seed: int, max_nodes: int = 8, max_t: int = 8) -> Network | None:
    """A seeded random directed network, or None when the draw is invalid."""
    rng = random.Random(seed)
    n = rng.randint(4, max_nodes)
    nodes = tuple(range(1, n + 1))
    t_max = rng.randint(3, max_t)
    exits = tuple(sorted(rng.sample(range(2, n + 1), k=rng.randint(1, 2))))
    police = (rng.choice([v for v in nodes if v not in exits]),)
    pairs = [(u, v) for u in nodes for v in nodes if u != v]
    rng.shuffle(pairs)
    edge_count = rng.randint(n, min(len(pairs), int(2.5 * n)))
    edges = tuple((u, v, rng.randint(1, 3)) for u, v in pairs[:edge_count])
    try:
        return Network(nodes=nodes, edges=edges, crime=1, police=police, exits=exits, t_max=t_max)
    except NetworkError:
        return None


def random_instance(
    seed: int,
    max_nodes: int = 8,
    max_t: int = 8,
    max_strategies: int = 4,
    oracle_budget: int = 50_000,
) -> tuple[Network, MixedStrategy] | None:
    """A seeded random (network, mix) pair small enough for the exact oracle."""
    net = random_network(seed, max_nodes=max_nodes, max_t=max_t)
    if net is None:
        return None
    paths = count_escape_paths(net)
    if paths == 0:
        return None
    rng = random.Random(seed ^ 0x5EED)
    count = rng.randint(1, min(max_strategies, paths))
    try:
        mix = generate_strategies(net, count, seed * 7 + 1)
    except StrategyError:
        return None
    dm = all_pairs_shortest(net)
    if count_defender_schedules(net, dm, net.police[0]) > oracle_budget:
        return None
    return net, mix


def take_instances(count: int, start_seed: int = 0, **kwargs):
    """First `count` valid random instances from consecutive seeds."""
    found = []
    seed = start_seed
    while len(found) < count:
        inst = random_instance(seed, **kwargs)
        if inst is not None:
            found.append((seed, *inst))
        seed += 1
        if seed - start_seed > 50 * count:
            raise RuntimeError("instance generator rejected too many seeds")
    return found
