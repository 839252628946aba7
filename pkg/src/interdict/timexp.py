"""Time-expanded (multi-layer) network construction and DOT export.

One copy of the road graph exists per integer time step 0..t_max.  A road edge
of length L connects node S in layer j to node T in layer j+L for every j with
j + L <= t_max, so every edge points strictly forward in time and the expanded
structure is a DAG.  Exit nodes additionally carry a wait chain
(e, i) -> (e, i+1) that lets a defender hold position at an exit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .network import Network


class LayeredNode(NamedTuple):
    v: int
    t: int

    @property
    def label(self) -> str:
        """Compact "t_v" notation, e.g. node 6 at time 0 is "0_6"."""
        return f"{self.t}_{self.v}"

    @classmethod
    def from_label(cls, text: str) -> "LayeredNode":
        t, _, v = text.partition("_")
        return cls(v=int(v), t=int(t))


Edge = tuple[LayeredNode, LayeredNode]


@dataclass(frozen=True)
class LayeredNetwork:
    """Immutable time-expanded DAG; safe to share across concurrent readers."""

    t_max: int
    node_ids: tuple[int, ...]
    exits: tuple[int, ...]
    nodes: tuple[LayeredNode, ...]
    travel_edges: tuple[Edge, ...]
    wait_edges: tuple[Edge, ...]
    successors: dict[LayeredNode, tuple[LayeredNode, ...]]

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.travel_edges + self.wait_edges


def build_layered(net: Network) -> LayeredNetwork:
    """Expand a road network into t_max + 1 layers (indices 0..t_max).

    Every (v, t) node is materialized even when unreachable; edges longer than
    the horizon simply contribute no expanded edges.
    """
    t_max = net.t_max
    nodes = tuple(
        LayeredNode(v, t) for t in range(t_max + 1) for v in sorted(net.nodes)
    )
    travel_edges: list[Edge] = []
    for src, dst, length in sorted(net.edges):
        for j in range(0, t_max - length + 1):
            travel_edges.append((LayeredNode(src, j), LayeredNode(dst, j + length)))
    wait_edges: list[Edge] = []
    for e in sorted(net.exit_set):
        for i in range(t_max):
            wait_edges.append((LayeredNode(e, i), LayeredNode(e, i + 1)))
    successors: dict[LayeredNode, list[LayeredNode]] = {n: [] for n in nodes}
    for a, b in travel_edges + wait_edges:
        successors[a].append(b)
    return LayeredNetwork(
        t_max=t_max,
        node_ids=tuple(sorted(net.nodes)),
        exits=tuple(sorted(net.exit_set)),
        nodes=nodes,
        travel_edges=tuple(sorted(travel_edges)),
        wait_edges=tuple(sorted(wait_edges)),
        successors={n: tuple(sorted(s)) for n, s in successors.items()},
    )


def _fmt_cost(value: float) -> str:
    return "inf" if value == float("inf") else f"{value:.6g}"


def export_dot(layered: LayeredNetwork, costs=None) -> str:
    """Render the layered network as Graphviz DOT text.

    When a cost table is given, each node label carries its g/h values the way
    a cost-annotated drawing of the expanded graph would.  Output ordering is
    deterministic.
    """
    lines = ["digraph layered {", "  rankdir=LR;", "  node [shape=ellipse];"]
    for t in range(layered.t_max + 1):
        lines.append("  { rank=same;")
        for v in layered.node_ids:
            node = LayeredNode(v, t)
            label = node.label
            if costs is not None:
                g = _fmt_cost(costs.g.get(node, float("inf")))
                h = _fmt_cost(costs.h.get(node, 0.0))
                label = f"{label}\\ng={g}\\nh={h}"
            lines.append(f'    "{node.label}" [label="{label}"];')
        lines.append("  }")
    for a, b in sorted(layered.travel_edges):
        lines.append(f'  "{a.label}" -> "{b.label}";')
    for a, b in sorted(layered.wait_edges):
        lines.append(f'  "{a.label}" -> "{b.label}" [style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"
