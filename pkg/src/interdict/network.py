"""Road-network data model, validation, JSON file I/O, and shortest travel times.

The network file is a UTF-8 JSON object with exactly these keys:

    nodes   list of positive integer node ids
    edges   list of [src, dst, length] triples (directed, integer length >= 1)
    crime   node id where the pursuit starts
    police  list of node ids, one per defender
    exits   non-empty list of node ids the attacker escapes through
    tmax    integer time horizon >= 1

Unknown keys are rejected so typos fail loudly instead of being ignored.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

UNREACHABLE = math.inf

_NETWORK_KEYS = ("nodes", "edges", "crime", "police", "exits", "tmax")


class NetworkError(ValueError):
    """Raised for malformed network files or violated network invariants."""


def _require_int(value, what: str) -> int:
    # bool is an int subclass; a bare `true` in the file is still a type error
    if isinstance(value, bool) or not isinstance(value, int):
        raise NetworkError(f"{what} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class Network:
    """Immutable directed road graph with integer travel times.

    Attributes:
        nodes: ordered node ids (positive integers, no duplicates).
        edges: directed (src, dst, length) triples, length >= 1.
        crime: node where the attacker starts at time 0.
        police: defender start nodes, one entry per defender.
        exits: nodes through which the attacker can escape.
        t_max: planning horizon; all action happens in [0, t_max].
    """

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]
    crime: int
    police: tuple[int, ...]
    exits: tuple[int, ...]
    t_max: int

    def __post_init__(self) -> None:
        if not self.nodes:
            raise NetworkError("node list is empty")
        seen: set[int] = set()
        for v in self.nodes:
            _require_int(v, "node id")
            if v <= 0:
                raise NetworkError(f"node id must be positive, got {v}")
            if v in seen:
                raise NetworkError(f"duplicate node id {v}")
            seen.add(v)
        _require_int(self.t_max, "tmax")
        if self.t_max < 1:
            raise NetworkError(f"tmax must be >= 1, got {self.t_max}")
        pairs: set[tuple[int, int]] = set()
        for edge in self.edges:
            if len(edge) != 3:
                raise NetworkError(f"edge must be a (src, dst, length) triple, got {edge!r}")
            src, dst, length = edge
            _require_int(src, "edge source")
            _require_int(dst, "edge target")
            _require_int(length, "edge length")
            for endpoint in (src, dst):
                if endpoint not in seen:
                    raise NetworkError(f"edge ({src}, {dst}) references unknown node {endpoint}")
            if length < 1:
                raise NetworkError(f"edge ({src}, {dst}) length must be >= 1, got {length}")
            if src == dst:
                raise NetworkError(f"self-loop on node {src} is not allowed")
            if (src, dst) in pairs:
                raise NetworkError(f"duplicate edge ({src}, {dst})")
            pairs.add((src, dst))
        if _require_int(self.crime, "crime node") not in seen:
            raise NetworkError(f"crime node {self.crime} is not in the node list")
        if not self.police:
            raise NetworkError("police start list is empty")
        for v in self.police:
            if _require_int(v, "police start") not in seen:
                raise NetworkError(f"police start {v} is not in the node list")
        if not self.exits:
            raise NetworkError("exit list is empty")
        exit_seen: set[int] = set()
        for v in self.exits:
            if _require_int(v, "exit node") not in seen:
                raise NetworkError(f"exit node {v} is not in the node list")
            if v in exit_seen:
                raise NetworkError(f"duplicate exit node {v}")
            exit_seen.add(v)
        if self.crime in exit_seen:
            raise NetworkError(f"crime node {self.crime} must not be an exit node")

    @cached_property
    def exit_set(self) -> frozenset[int]:
        return frozenset(self.exits)

    @cached_property
    def adjacency(self) -> dict[int, tuple[tuple[int, int], ...]]:
        """Outgoing (dst, length) pairs per node, sorted for determinism."""
        out: dict[int, list[tuple[int, int]]] = {v: [] for v in self.nodes}
        for src, dst, length in self.edges:
            out[src].append((dst, length))
        return {v: tuple(sorted(pairs)) for v, pairs in out.items()}


def parse_network(text: str) -> Network:
    """Parse and validate a network file (see module docstring for the schema)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkError(
            f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(obj, dict):
        raise NetworkError("network file must contain a JSON object")
    unknown = sorted(set(obj) - set(_NETWORK_KEYS))
    if unknown:
        raise NetworkError(f"unknown keys in network file: {', '.join(unknown)}")
    missing = [k for k in _NETWORK_KEYS if k not in obj]
    if missing:
        raise NetworkError(f"missing keys in network file: {', '.join(missing)}")
    for key in ("nodes", "edges", "police", "exits"):
        if not isinstance(obj[key], list):
            raise NetworkError(f"field {key!r} must be a list")
    edges = []
    for i, entry in enumerate(obj["edges"]):
        if not isinstance(entry, list) or len(entry) != 3:
            raise NetworkError(f"edge #{i} must be a [src, dst, length] triple, got {entry!r}")
        edges.append(tuple(entry))
    return Network(
        nodes=tuple(obj["nodes"]),
        edges=tuple(edges),
        crime=obj["crime"],
        police=tuple(obj["police"]),
        exits=tuple(obj["exits"]),
        t_max=obj["tmax"],
    )


def serialize_network(net: Network) -> str:
    """Canonical JSON form; parsing it back yields an identical Network."""
    rows = [
        f'  "crime": {net.crime},',
        f'  "edges": {json.dumps([list(e) for e in net.edges])},',
        f'  "exits": {json.dumps(list(net.exits))},',
        f'  "nodes": {json.dumps(list(net.nodes))},',
        f'  "police": {json.dumps(list(net.police))},',
        f'  "tmax": {net.t_max}',
    ]
    return "{\n" + "\n".join(rows) + "\n}\n"


@dataclass(frozen=True)
class DistanceMatrix:
    """All-pairs shortest travel times; UNREACHABLE (inf) marks missing paths."""

    table: dict[tuple[int, int], float]

    def travel_time(self, src: int, dst: int) -> float:
        return self.table[(src, dst)]

    def reachable(self, src: int, dst: int) -> bool:
        return self.table[(src, dst)] != UNREACHABLE


def all_pairs_shortest(net: Network) -> DistanceMatrix:
    """Floyd-Warshall over edge lengths. Deterministic for a given Network."""
    dist: dict[tuple[int, int], float] = {
        (u, v): (0 if u == v else UNREACHABLE) for u in net.nodes for v in net.nodes
    }
    for src, dst, length in net.edges:
        if length < dist[(src, dst)]:
            dist[(src, dst)] = length
    for k in net.nodes:
        for i in net.nodes:
            through_k = dist[(i, k)]
            if through_k == UNREACHABLE:
                continue
            for j in net.nodes:
                candidate = through_k + dist[(k, j)]
                if candidate < dist[(i, j)]:
                    dist[(i, j)] = candidate
    return DistanceMatrix(table=dist)
