"""Benchmark MILP for the optimal defender schedule, emitted as LP text.

The model picks, for each defender r, a sequence of L_max occupied nodes
(s variables, one node per state), chains the state times through integer
waits and shortest-path travel, and scores interception of each attacker
state through a big-M timing linearization.  No solver is linked: the model
is written as an industry-standard LP file and solutions are read back from
plain "name value" text.

Variable naming (deterministic):

    s_r{r}_i{i}_v{v}          defender r occupies node v in state i
    w_r{r}_i{i}_{v}_{u}       defender r moves v -> u between states i, i+1
    k_r{r}_i{i}               integer wait multiplier at state i
    tin_r{r}_i{i}/tout_...    state entry/exit times (continuous)
    alpha_A{a}_j{j}_r{r}_i{i} attacker state j of strategy a arrives at or
                              after tin of state i
    beta_A{a}_j{j}_r{r}_i{i}  ... at or before tout of state i
    gamma_A{a}_j{j}_r{r}_i{i} interception indicator (alpha and beta and s)
    z_A{a}                    strategy a intercepted anywhere

Defender indices r and state indices i are 1-based; strategy indices a and
attacker state indices j are 0-based.

By default defender states range over the non-exit nodes only, which is the
literal occupancy domain of the formulation (and what the documented variable
counts assume).  Pass exit_occupiable=True to let defenders hold exit nodes
too; that extended domain matches the oracle's feasible set and is the one
that reproduces the published benchmark optimum, where the defender ends the
pursuit parked on the exit node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .evaluator import DefenderSchedule, intercepts
from .network import DistanceMatrix, Network, all_pairs_shortest
from .strategies import MixedStrategy

INT_TOLERANCE = 1e-6


class MilpError(ValueError):
    """Raised for unbuildable models."""


class SolutionError(ValueError):
    """Raised for unreadable, infeasible, or inconsistent solution files."""


@dataclass(frozen=True)
class LinearRow:
    name: str
    coeffs: tuple[tuple[str, float], ...]
    sense: str  # "<=", ">=", "="
    rhs: float


@dataclass(frozen=True)
class MilpModel:
    num_defenders: int
    l_max: int
    delta: float
    big_m: float
    t_max: int
    domain: tuple[int, ...]
    exit_occupiable: bool
    starts: tuple[int, ...]
    mix: MixedStrategy
    binaries: tuple[str, ...]
    generals: tuple[str, ...]
    continuous: tuple[str, ...]
    bounds: dict[str, tuple[float, float]]
    objective: tuple[tuple[str, float], ...]
    objective_constant: float
    rows: tuple[LinearRow, ...]

    def variables(self) -> tuple[str, ...]:
        return self.binaries + self.generals + self.continuous

    def count_by_prefix(self, prefix: str) -> int:
        return sum(1 for name in self.variables() if name.startswith(prefix))


def _s(r: int, i: int, v: int) -> str:
    return f"s_r{r}_i{i}_v{v}"


def _w(r: int, i: int, v: int, u: int) -> str:
    return f"w_r{r}_i{i}_{v}_{u}"


def _k(r: int, i: int) -> str:
    return f"k_r{r}_i{i}"


def _tin(r: int, i: int) -> str:
    return f"tin_r{r}_i{i}"


def _tout(r: int, i: int) -> str:
    return f"tout_r{r}_i{i}"


def _abg(kind: str, a: int, j: int, r: int, i: int) -> str:
    return f"{kind}_A{a}_j{j}_r{r}_i{i}"


def _z(a: int) -> str:
    return f"z_A{a}"


def build_milp(
    net: Network,
    mix: MixedStrategy,
    m: int = 1,
    l_max: int | None = None,
    delta: float = 1.0,
    big_m: float | None = None,
    exit_occupiable: bool = False,
) -> MilpModel:
    """Construct the full model; see the module docstring for the domains.

    Defaults: l_max = t_max + 1 (a state consumes at least one time unit of
    travel, so more states can never help), delta = 1 matching the integer
    edge lengths, big_m = t_max + 1 which dominates every time difference in
    [0, t_max].
    """
    if m < 1:
        raise MilpError(f"defender count must be >= 1, got {m}")
    if m > len(net.police):
        raise MilpError(f"{m} defenders requested but only {len(net.police)} starts listed")
    if l_max is None:
        l_max = net.t_max + 1
    if l_max < 2:
        raise MilpError(f"l_max must be >= 2, got {l_max}")
    if big_m is None:
        big_m = net.t_max + 1
    if big_m <= net.t_max:
        raise MilpError(f"big_m must exceed t_max ({net.t_max}), got {big_m}")
    if delta <= 0:
        raise MilpError(f"delta must be positive, got {delta}")
    if exit_occupiable:
        domain = tuple(sorted(net.nodes))
    else:
        domain = tuple(sorted(set(net.nodes) - net.exit_set))
        if not domain:
            raise MilpError("every node is an exit; no occupiable defender states")
    starts = net.police[:m]
    for r, start in enumerate(starts, start=1):
        if start not in domain:
            raise MilpError(
                f"defender {r} starts at exit node {start}, which the strict "
                "state domain excludes; use exit_occupiable=True"
            )
    dm = all_pairs_shortest(net)
    defenders = range(1, m + 1)
    states = range(1, l_max + 1)

    binaries: list[str] = []
    generals: list[str] = []
    continuous: list[str] = []
    bounds: dict[str, tuple[float, float]] = {}
    rows: list[LinearRow] = []

    for r in defenders:
        for i in states:
            for v in domain:
                binaries.append(_s(r, i, v))
    for r in defenders:
        for i in range(1, l_max):
            for v in domain:
                for u in domain:
                    name = _w(r, i, v, u)
                    binaries.append(name)
                    if v != u and not dm.reachable(v, u):
                        bounds[name] = (0.0, 0.0)  # unreachable move is forbidden
    for r in defenders:
        for i in states:
            generals.append(_k(r, i))
            bounds[_k(r, i)] = (0.0, math.floor(net.t_max / delta))
            continuous.append(_tin(r, i))
            continuous.append(_tout(r, i))
            bounds[_tin(r, i)] = (0.0, net.t_max)
            bounds[_tout(r, i)] = (0.0, net.t_max)
    for a, strat in enumerate(mix.strategies):
        for j in range(len(strat.states)):
            for r in defenders:
                for i in states:
                    binaries.append(_abg("alpha", a, j, r, i))
                    binaries.append(_abg("beta", a, j, r, i))
                    binaries.append(_abg("gamma", a, j, r, i))
    for a in range(len(mix.strategies)):
        binaries.append(_z(a))

    # initial location and one occupied node per state
    for r, start in zip(defenders, starts):
        rows.append(LinearRow(f"init_r{r}", ((_s(r, 1, start), 1.0),), "=", 1.0))
        for i in states:
            rows.append(
                LinearRow(
                    f"one_r{r}_i{i}",
                    tuple((_s(r, i, v), 1.0) for v in domain),
                    "=",
                    1.0,
                )
            )
    # movement indicators linearize s_i,v AND s_i+1,u
    for r in defenders:
        for i in range(1, l_max):
            for v in domain:
                for u in domain:
                    w = _w(r, i, v, u)
                    rows.append(
                        LinearRow(f"movea_r{r}_i{i}_{v}_{u}", ((w, 1.0), (_s(r, i, v), -1.0)), "<=", 0.0)
                    )
                    rows.append(
                        LinearRow(
                            f"moveb_r{r}_i{i}_{v}_{u}", ((w, 1.0), (_s(r, i + 1, u), -1.0)), "<=", 0.0
                        )
                    )
                    rows.append(
                        LinearRow(
                            f"movec_r{r}_i{i}_{v}_{u}",
                            ((w, 1.0), (_s(r, i, v), -1.0), (_s(r, i + 1, u), -1.0)),
                            ">=",
                            -1.0,
                        )
                    )
    # temporal chaining: start at 0, end at t_max, waits are integer multiples
    # of delta, and travel takes shortest-path time
    for r in defenders:
        rows.append(LinearRow(f"tstart_r{r}", ((_tin(r, 1), 1.0),), "=", 0.0))
        rows.append(LinearRow(f"tend_r{r}", ((_tout(r, l_max), 1.0),), "=", float(net.t_max)))
        for i in states:
            rows.append(
                LinearRow(
                    f"wait_r{r}_i{i}",
                    ((_tout(r, i), 1.0), (_tin(r, i), -1.0), (_k(r, i), -delta)),
                    "=",
                    0.0,
                )
            )
        for i in range(1, l_max):
            coeffs: list[tuple[str, float]] = [(_tin(r, i + 1), 1.0), (_tout(r, i), -1.0)]
            for v in domain:
                for u in domain:
                    if v == u:
                        continue  # zero travel, zero coefficient
                    d = dm.travel_time(v, u)
                    if d != math.inf:
                        coeffs.append((_w(r, i, v, u), -float(d)))
            rows.append(LinearRow(f"travel_r{r}_i{i}", tuple(coeffs), "=", 0.0))
    # big-M interception timing plus conjunction and coverage rows
    domain_set = set(domain)
    for a, strat in enumerate(mix.strategies):
        gamma_terms: list[tuple[str, float]] = []
        for j, (av, at) in enumerate(strat.states):
            for r in defenders:
                for i in states:
                    alpha = _abg("alpha", a, j, r, i)
                    beta = _abg("beta", a, j, r, i)
                    gamma = _abg("gamma", a, j, r, i)
                    rows.append(
                        LinearRow(
                            f"arrlo_A{a}_j{j}_r{r}_i{i}",
                            ((_tin(r, i), 1.0), (alpha, big_m)),
                            ">=",
                            float(at),
                        )
                    )
                    rows.append(
                        LinearRow(
                            f"arrhi_A{a}_j{j}_r{r}_i{i}",
                            ((_tin(r, i), 1.0), (alpha, big_m)),
                            "<=",
                            float(at) + big_m,
                        )
                    )
                    rows.append(
                        LinearRow(
                            f"deplo_A{a}_j{j}_r{r}_i{i}",
                            ((_tout(r, i), 1.0), (beta, -big_m)),
                            "<=",
                            float(at),
                        )
                    )
                    rows.append(
                        LinearRow(
                            f"dephi_A{a}_j{j}_r{r}_i{i}",
                            ((_tout(r, i), 1.0), (beta, -big_m)),
                            ">=",
                            float(at) - big_m,
                        )
                    )
                    occupancy = ((_s(r, i, av), -1.0),) if av in domain_set else ()
                    rows.append(
                        LinearRow(
                            f"conja_A{a}_j{j}_r{r}_i{i}",
                            ((gamma, 3.0), (alpha, -1.0), (beta, -1.0)) + occupancy,
                            "<=",
                            0.0,
                        )
                    )
                    rows.append(
                        LinearRow(
                            f"conjb_A{a}_j{j}_r{r}_i{i}",
                            ((gamma, 1.0), (alpha, -1.0), (beta, -1.0)) + occupancy,
                            ">=",
                            -2.0,
                        )
                    )
                    gamma_terms.append((gamma, -1.0))
        rows.append(LinearRow(f"cover_A{a}", ((_z(a), 1.0),) + tuple(gamma_terms), "<=", 0.0))

    objective = tuple((_z(a), float(p)) for a, p in enumerate(mix.probs))
    return MilpModel(
        num_defenders=m,
        l_max=l_max,
        delta=delta,
        big_m=big_m,
        t_max=net.t_max,
        domain=domain,
        exit_occupiable=exit_occupiable,
        starts=tuple(starts),
        mix=mix,
        binaries=tuple(binaries),
        generals=tuple(generals),
        continuous=tuple(continuous),
        bounds=bounds,
        objective=objective,
        objective_constant=-float(sum(mix.probs)),
        rows=tuple(rows),
    )


def _fmt_num(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def _fmt_terms(coeffs: Iterable[tuple[str, float]], constant: float = 0.0) -> str:
    parts: list[str] = []
    for name, coef in coeffs:
        mag = _fmt_num(abs(coef))
        if not parts:
            parts.append(f"{mag} {name}" if coef >= 0 else f"- {mag} {name}")
        else:
            parts.append(f"{'+' if coef >= 0 else '-'} {mag} {name}")
    if constant:
        sign = "+" if constant > 0 else "-"
        parts.append(f"{sign} {_fmt_num(abs(constant))}")
    return " ".join(parts) if parts else "0"


def _wrap(text: str, width: int = 72, indent: str = "   ") -> list[str]:
    words = text.split(" ")
    lines: list[str] = []
    current = ""
    for word in words:
        if current and len(current) + 1 + len(word) > width:
            lines.append(current)
            current = indent + word
        else:
            current = word if not current else f"{current} {word}"
    if current:
        lines.append(current)
    return lines


def emit_lp(model: MilpModel) -> str:
    """Write the model as LP-format text; two emissions are byte-identical."""
    lines: list[str] = ["Maximize"]
    lines.extend(_wrap(" obj: " + _fmt_terms(model.objective, model.objective_constant)))
    lines.append("Subject To")
    for row in model.rows:
        lines.extend(_wrap(f" {row.name}: {_fmt_terms(row.coeffs)} {row.sense} {_fmt_num(row.rhs)}"))
    bound_lines = [
        f" {_fmt_num(model.bounds[name][0])} <= {name} <= {_fmt_num(model.bounds[name][1])}"
        for name in model.generals + model.continuous
    ]
    bound_lines.extend(
        f" {name} = 0"
        for name in model.binaries
        if model.bounds.get(name) == (0.0, 0.0)
    )
    # a group with no members never emits a dangling section header
    if bound_lines:
        lines.append("Bounds")
        lines.extend(bound_lines)
    if model.binaries:
        lines.append("Binaries")
        lines.extend(_wrap(" " + " ".join(model.binaries), indent="  "))
    if model.generals:
        lines.append("Generals")
        lines.extend(_wrap(" " + " ".join(model.generals), indent="  "))
    lines.append("End")
    return "\n".join(lines) + "\n"


def count_lp_variables(lp_text: str) -> dict[str, int]:
    """Count declared variables per name prefix from emitted LP text.

    Reads the Binaries and Generals sections plus continuous names bounded in
    Bounds; used to confirm that emission round-trips the model's counts.
    """
    sections: dict[str, list[str]] = {}
    current = None
    for raw in lp_text.splitlines():
        line = raw.rstrip()
        if not line:
            continue
        key = line.strip().lower()
        if key in ("maximize", "minimize", "subject to", "bounds", "binaries", "generals", "end"):
            current = key
            continue
        sections.setdefault(current or "", []).append(line.strip())
    names: set[str] = set()
    for line in sections.get("binaries", []) + sections.get("generals", []):
        names.update(line.split())
    for line in sections.get("bounds", []):
        tokens = line.split()
        for tok in tokens:
            if tok and (tok[0].isalpha() or tok[0] == "_") and tok not in ("<=", ">=", "="):
                names.add(tok)
    counts: dict[str, int] = {}
    for name in names:
        prefix = name.split("_", 1)[0]
        counts[prefix] = counts.get(prefix, 0) + 1
    return counts


def _states_for_assignment(model: MilpModel, sched: DefenderSchedule) -> list[tuple[int, float, float]]:
    states = [(v, float(ti), float(to)) for v, ti, to in sched.states]
    if not states:
        raise SolutionError("cannot encode an empty schedule")
    if len(states) > model.l_max:
        raise SolutionError(f"schedule has {len(states)} states, model allows {model.l_max}")
    last_v = states[-1][0]
    # pad with zero-length stays at the final node up to exactly l_max states
    while len(states) < model.l_max:
        states.append((last_v, float(model.t_max), float(model.t_max)))
    return states


def assignment_from_schedules(
    model: MilpModel, schedules: Sequence[DefenderSchedule]
) -> dict[str, float]:
    """Encode schedules as a full variable assignment.

    The schedules must move at shortest-path speed (as oracle and parsed
    solutions do) or the travel rows will not hold; use check_assignment to
    verify.  z is set to 1 exactly where some gamma fires, which is the
    objective-maximal completion for the given schedules.
    """
    if len(schedules) != model.num_defenders:
        raise SolutionError(
            f"{len(schedules)} schedules given, model has {model.num_defenders} defenders"
        )
    assign = {name: 0.0 for name in model.variables()}
    for r, sched in enumerate(schedules, start=1):
        states = _states_for_assignment(model, sched)
        for i, (v, t_in, t_out) in enumerate(states, start=1):
            if v not in model.domain:
                raise SolutionError(f"schedule node {v} is outside the model state domain")
            assign[_s(r, i, v)] = 1.0
            assign[_tin(r, i)] = t_in
            assign[_tout(r, i)] = t_out
            assign[_k(r, i)] = (t_out - t_in) / model.delta
        for i in range(1, model.l_max):
            assign[_w(r, i, states[i - 1][0], states[i][0])] = 1.0
    for a, strat in enumerate(model.mix.strategies):
        covered = 0.0
        for j, (av, at) in enumerate(strat.states):
            for r in range(1, model.num_defenders + 1):
                for i in range(1, model.l_max + 1):
                    alpha = 1.0 if assign[_tin(r, i)] <= at else 0.0
                    beta = 1.0 if at <= assign[_tout(r, i)] else 0.0
                    occupied = assign.get(_s(r, i, av), 0.0)
                    assign[_abg("alpha", a, j, r, i)] = alpha
                    assign[_abg("beta", a, j, r, i)] = beta
                    gamma = 1.0 if (alpha and beta and occupied) else 0.0
                    assign[_abg("gamma", a, j, r, i)] = gamma
                    covered += gamma
        assign[_z(a)] = 1.0 if covered else 0.0
    return assign


def objective_value(model: MilpModel, assign: Mapping[str, float]) -> float:
    return sum(coef * assign.get(name, 0.0) for name, coef in model.objective) + (
        model.objective_constant
    )


def check_assignment(
    model: MilpModel, assign: Mapping[str, float], tol: float = INT_TOLERANCE
) -> list[str]:
    """Names of violated rows/bounds/integrality; empty list means feasible."""
    violations: list[str] = []
    for row in model.rows:
        lhs = sum(coef * assign.get(name, 0.0) for name, coef in row.coeffs)
        if row.sense == "<=" and lhs > row.rhs + tol:
            violations.append(row.name)
        elif row.sense == ">=" and lhs < row.rhs - tol:
            violations.append(row.name)
        elif row.sense == "=" and abs(lhs - row.rhs) > tol:
            violations.append(row.name)
    for name in model.binaries:
        value = assign.get(name, 0.0)
        if min(abs(value), abs(value - 1.0)) > tol:
            violations.append(f"binary:{name}")
    for name in model.generals:
        value = assign.get(name, 0.0)
        if abs(value - round(value)) > tol:
            violations.append(f"integer:{name}")
    for name, (lo, hi) in model.bounds.items():
        value = assign.get(name, 0.0)
        if value < lo - tol or value > hi + tol:
            violations.append(f"bound:{name}")
    return violations


@dataclass
class ParsedSolution:
    objective: float
    utility: float
    schedules: tuple[DefenderSchedule, ...]
    intercepted: tuple[bool, ...]
    evaluator_utility: float


def parse_solution(model: MilpModel, text: str) -> ParsedSolution:
    """Read a solver solution and reconstruct the defender schedules.

    Input format: an `objective <value>` line plus `<varname> <value>` lines;
    `#` starts a comment and variables left out default to 0 (sparse solver
    output).  The entry/exit times of every occupied state must be present.
    The reported utility is 1 + objective; the schedules are also rescored
    against the true interception semantics, and a strategy flagged
    intercepted (z = 1) that the schedules do not actually intercept is
    reported as a model-or-solver defect.
    """
    values: dict[str, float] = {}
    objective: float | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SolutionError(f"line {lineno}: expected '<name> <value>', got {raw!r}")
        name, value_text = parts
        try:
            value = float(value_text)
        except ValueError as exc:
            raise SolutionError(f"line {lineno}: bad value {value_text!r}") from exc
        if name == "objective":
            objective = value
        else:
            values[name] = value
    if objective is None:
        raise SolutionError("missing 'objective' line in solution")

    known = set(model.variables())
    for name in values:
        if name not in known:
            raise SolutionError(f"unknown variable {name!r} in solution")

    def binary(name: str) -> int:
        value = values.get(name, 0.0)
        if abs(value) <= INT_TOLERANCE:
            return 0
        if abs(value - 1.0) <= INT_TOLERANCE:
            return 1
        raise SolutionError(f"integrality violation: {name} = {value}")

    schedules: list[DefenderSchedule] = []
    for r in range(1, model.num_defenders + 1):
        raw_states: list[tuple[int, float, float]] = []
        for i in range(1, model.l_max + 1):
            occupied = [v for v in model.domain if binary(_s(r, i, v))]
            if not occupied:
                raise SolutionError(
                    f"defender {r} state {i}: no occupied node (one-node-per-state row violated)"
                )
            if len(occupied) > 1:
                raise SolutionError(
                    f"defender {r} state {i}: multiple occupied nodes {occupied}"
                )
            for tname in (_tin(r, i), _tout(r, i)):
                if tname not in values:
                    raise SolutionError(f"missing variable {tname} in solution")
            raw_states.append((occupied[0], values[_tin(r, i)], values[_tout(r, i)]))
        collapsed: list[tuple[int, int | float, int | float]] = []
        for v, t_in, t_out in raw_states:
            t_in = _snap(t_in)
            t_out = _snap(t_out)
            if collapsed and collapsed[-1][0] == v:
                collapsed[-1] = (v, collapsed[-1][1], t_out)
            else:
                collapsed.append((v, t_in, t_out))
        schedules.append(DefenderSchedule(states=tuple(collapsed)))

    flags = []
    for a, strat in enumerate(model.mix.strategies):
        flag = bool(binary(_z(a)))
        if flag and not any(intercepts(s, strat) for s in schedules):
            raise SolutionError(
                f"z_A{a} = 1 but the reconstructed schedules do not intercept "
                f"strategy {a}: model-or-solver defect"
            )
        flags.append(flag)

    evaluator_utility = sum(
        p
        for (strat, p) in model.mix.items()
        if any(intercepts(s, strat) for s in schedules)
    )
    return ParsedSolution(
        objective=objective,
        utility=1.0 + objective,
        schedules=tuple(schedules),
        intercepted=tuple(flags),
        evaluator_utility=evaluator_utility,
    )


def _snap(value: float) -> int | float:
    nearest = round(value)
    if abs(value - nearest) <= INT_TOLERANCE:
        return int(nearest)
    return value
