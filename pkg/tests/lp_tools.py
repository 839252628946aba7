"""Independent LP-file reader and MILP solve harness for the tests.

Reads the LP subset this project emits (and that CPLEX/Gurobi accept), builds
matrices, and solves with HiGHS through scipy.optimize.milp.  This stands in
for the out-of-process solver the artifact delegates to, so the end-to-end
emit -> solve -> parse_solution loop can run inside the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import Bounds, LinearConstraint
from scipy.optimize import milp as scipy_milp

_SECTIONS = ("maximize", "minimize", "subject to", "bounds", "binaries", "generals", "end")


@dataclass
class LpProblem:
    maximize: bool
    objective: dict[str, float]
    objective_constant: float
    rows: list[tuple[str, dict[str, float], str, float]]
    bounds: dict[str, tuple[float, float]]
    binaries: set[str] = field(default_factory=set)
    generals: set[str] = field(default_factory=set)

    def variables(self) -> list[str]:
        names: set[str] = set(self.objective)
        for _, coeffs, _, _ in self.rows:
            names.update(coeffs)
        names.update(self.bounds)
        names.update(self.binaries)
        names.update(self.generals)
        return sorted(names)


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def _parse_linear(tokens: list[str]) -> tuple[dict[str, float], float]:
    coeffs: dict[str, float] = {}
    constant = 0.0
    sign = 1.0
    pending: float | None = None
    for token in tokens:
        if token == "+":
            if pending is not None:
                constant += sign * pending
                pending = None
            sign = 1.0
        elif token == "-":
            if pending is not None:
                constant += sign * pending
                pending = None
            sign = -1.0
        elif _is_number(token):
            if pending is not None:
                constant += sign * pending
            pending = float(token)
        else:
            value = pending if pending is not None else 1.0
            coeffs[token] = coeffs.get(token, 0.0) + sign * value
            pending = None
            sign = 1.0
    if pending is not None:
        constant += sign * pending
    return coeffs, constant


def parse_lp(text: str) -> LpProblem:
    sections: dict[str, list[str]] = {name: [] for name in _SECTIONS}
    current: str | None = None
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        key = line.strip().lower()
        if key in _SECTIONS:
            current = key
            continue
        if current is None:
            raise ValueError(f"content before first section: {raw!r}")
        sections[current].append(line)

    obj_section = "maximize" if sections["maximize"] else "minimize"
    obj_tokens = " ".join(sections[obj_section]).split()
    if obj_tokens and obj_tokens[0].endswith(":"):
        obj_tokens = obj_tokens[1:]
    objective, obj_constant = _parse_linear(obj_tokens)

    rows: list[tuple[str, dict[str, float], str, float]] = []
    row_tokens = " ".join(sections["subject to"]).split()
    i = 0
    while i < len(row_tokens):
        token = row_tokens[i]
        if not token.endswith(":"):
            raise ValueError(f"expected a row name, got {token!r}")
        name = token[:-1]
        i += 1
        body: list[str] = []
        while i < len(row_tokens) and not row_tokens[i].endswith(":"):
            body.append(row_tokens[i])
            i += 1
        sense_pos = max(body.index(s) for s in ("<=", ">=", "=") if s in body)
        sense = body[sense_pos]
        coeffs, const = _parse_linear(body[:sense_pos])
        rhs = float(body[sense_pos + 1]) - const
        rows.append((name, coeffs, sense, rhs))

    bounds: dict[str, tuple[float, float]] = {}
    for line in sections["bounds"]:
        tokens = line.split()
        if len(tokens) == 5 and tokens[1] == "<=" and tokens[3] == "<=":
            bounds[tokens[2]] = (float(tokens[0]), float(tokens[4]))
        elif len(tokens) == 3 and tokens[1] == "=":
            bounds[tokens[0]] = (float(tokens[2]), float(tokens[2]))
        elif len(tokens) == 3 and tokens[1] in ("<=", ">="):
            name, value = tokens[0], float(tokens[2])
            lo, hi = bounds.get(name, (0.0, np.inf))
            bounds[name] = (lo, value) if tokens[1] == "<=" else (value, hi)
        else:
            raise ValueError(f"unsupported bounds line: {line!r}")

    binaries = set(" ".join(sections["binaries"]).split())
    generals = set(" ".join(sections["generals"]).split())
    return LpProblem(
        maximize=bool(sections["maximize"]),
        objective=objective,
        objective_constant=obj_constant,
        rows=rows,
        bounds=bounds,
        binaries=binaries,
        generals=generals,
    )


def solve_lp(problem: LpProblem) -> tuple[float, dict[str, float]]:
    """Solve with HiGHS; returns (objective incl. constant, variable values)."""
    names = problem.variables()
    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    c = np.zeros(n)
    for name, coef in problem.objective.items():
        c[index[name]] = -coef if problem.maximize else coef
    lb = np.zeros(n)
    ub = np.full(n, np.inf)
    integrality = np.zeros(n)
    for name in problem.binaries:
        integrality[index[name]] = 1
        ub[index[name]] = 1.0
    for name in problem.generals:
        integrality[index[name]] = 1
    for name, (lo, hi) in problem.bounds.items():
        lb[index[name]], ub[index[name]] = lo, hi
    A = np.zeros((len(problem.rows), n))
    row_lo = np.zeros(len(problem.rows))
    row_hi = np.zeros(len(problem.rows))
    for r, (_, coeffs, sense, rhs) in enumerate(problem.rows):
        for name, coef in coeffs.items():
            A[r, index[name]] += coef
        if sense == "<=":
            row_lo[r], row_hi[r] = -np.inf, rhs
        elif sense == ">=":
            row_lo[r], row_hi[r] = rhs, np.inf
        else:
            row_lo[r] = row_hi[r] = rhs
    result = scipy_milp(
        c=c,
        constraints=LinearConstraint(A, row_lo, row_hi),
        integrality=integrality,
        bounds=Bounds(lb, ub),
    )
    if not result.success:
        raise RuntimeError(f"MILP solve failed: {result.message}")
    values = {name: float(result.x[index[name]]) for name in names}
    linear = sum(coef * values[name] for name, coef in problem.objective.items())
    return linear + problem.objective_constant, values


def solution_text(objective: float, values: dict[str, float]) -> str:
    """Solution in the package's documented 'objective v' + 'name v' format."""
    lines = [f"objective {objective!r}"]
    lines.extend(f"{name} {value!r}" for name, value in sorted(values.items()))
    return "\n".join(lines) + "\n"


def solve_lp_text(lp_text: str) -> tuple[float, dict[str, float]]:
    return solve_lp(parse_lp(lp_text))
