"""Command-line interface.

Subcommands: plan, gen-strategies, evaluate, oracle, bench, export-lp,
import-solution, export-dot.  Randomized commands require an explicit --seed.
Exit codes: 0 success, 2 file/parse/validation errors, 3 no usable defender
path.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import evaluator, milp, planner, strategies, timexp
from .network import Network, NetworkError, parse_network
from .strategies import MixedStrategy, StrategyError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_PATH = 3


class _CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _load_network(path: str) -> Network:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"cannot read network file {path}: {exc}")
    try:
        return parse_network(text)
    except NetworkError as exc:
        raise _CliError(f"{path}: {exc}")


def _load_strategies(path: str, net: Network) -> MixedStrategy:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"cannot read strategies file {path}: {exc}")
    try:
        return strategies.parse_strategies(text, net)
    except StrategyError as exc:
        raise _CliError(f"{path}: {exc}")


def _write_out(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _schedule_from_text(text: str) -> evaluator.DefenderSchedule:
    states = []
    for chunk in text.split(";"):
        parts = chunk.strip().split(",")
        if len(parts) != 3:
            raise _CliError(f"bad schedule state {chunk!r}; expected 'v,t_in,t_out'")
        try:
            states.append(tuple(int(p) for p in parts))
        except ValueError:
            raise _CliError(f"bad schedule state {chunk!r}; expected integers")
    return evaluator.DefenderSchedule(states=tuple(states))


def cmd_plan(args) -> int:
    net = _load_network(args.network)
    mix = _load_strategies(args.strategies, net)
    layered = timexp.build_layered(net)
    starts = net.police[: args.defenders] if args.defenders else net.police
    if args.defenders and args.defenders > len(net.police):
        raise _CliError(f"--defenders {args.defenders} exceeds listed police starts")
    if len(starts) == 1:
        try:
            result = planner.plan_defender(net, layered, mix, starts[0])
        except planner.NoPathError as exc:
            print(f"NO_PATH: {exc}", file=sys.stderr)
            return EXIT_NO_PATH
        print("path: " + ", ".join(n.label for n in result.layered_path))
        print("schedule: " + result.schedule.compact())
        print(f"path cost P: {result.path_cost}")
        print(f"proxy utility (1 - P): {result.proxy_utility}")
        print(f"evaluated utility: {result.evaluated_utility}")
        payload = result.to_dict()
    else:
        multi = planner.plan_multi(net, layered, mix, starts)
        for idx, plan in enumerate(multi.plans, start=1):
            path_text = ", ".join(n.label for n in plan.layered_path) or "(no path)"
            print(f"defender {idx} path: {path_text}")
            print(f"defender {idx} schedule: {plan.schedule.compact() or '(empty)'}")
            print(f"defender {idx} marginal utility: {plan.evaluated_utility}")
        print(f"combined utility: {multi.combined_utility}")
        payload = multi.to_dict()
        if all(not p.layered_path for p in multi.plans):
            print("NO_PATH: no defender found a usable path", file=sys.stderr)
            return EXIT_NO_PATH
    if args.out:
        _write_out(args.out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_gen_strategies(args) -> int:
    net = _load_network(args.network)
    try:
        mix = strategies.generate_strategies(net, args.count, args.seed)
    except StrategyError as exc:
        raise _CliError(str(exc))
    for strat, prob in mix.items():
        print(f"{strat.compact()}  p={prob}")
    _write_out(args.out, strategies.serialize_strategies(mix))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    net = _load_network(args.network)
    mix = _load_strategies(args.strategies, net)
    scheds: list[evaluator.DefenderSchedule] = []
    if args.plan:
        try:
            payload = json.loads(Path(args.plan).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise _CliError(f"cannot read plan file {args.plan}: {exc}")
        plan_dicts = payload["plans"] if "plans" in payload else [payload]
        for entry in plan_dicts:
            scheds.append(
                evaluator.DefenderSchedule(states=tuple(tuple(s) for s in entry["schedule"]))
            )
    for text in args.schedule or []:
        scheds.append(_schedule_from_text(text))
    if not scheds:
        raise _CliError("provide --plan and/or --schedule")
    for idx, (strat, prob) in enumerate(mix.items()):
        hit = any(evaluator.intercepts(s, strat) for s in scheds)
        verdict = "intercepted" if hit else "escaped"
        print(f"strategy {idx} [{strat.compact()}] p={prob}: {verdict}")
    print(f"utility: {evaluator.utility(scheds, mix)}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    net = _load_network(args.network)
    mix = _load_strategies(args.strategies, net)
    try:
        result = evaluator.oracle_best(net, mix, m=args.defenders, cap=args.cap)
    except (evaluator.CapExceededError, ValueError) as exc:
        raise _CliError(str(exc))
    print(f"optimum utility: {result.utility}")
    for idx, sched in enumerate(result.schedules, start=1):
        print(f"defender {idx} schedule: {sched.compact()}")
    print(f"enumerated schedules: {result.enumerated}")
    return EXIT_OK


def _bench_trial(net: Network, mix: MixedStrategy, starts) -> tuple[str, float, float]:
    begin = time.perf_counter()
    layered = timexp.build_layered(net)
    if len(starts) == 1:
        try:
            result = planner.plan_defender(net, layered, mix, starts[0])
            sched, util = result.schedule, result.evaluated_utility
        except planner.NoPathError:
            sched, util = evaluator.DefenderSchedule(states=()), 0.0
    else:
        multi = planner.plan_multi(net, layered, mix, starts)
        sched = evaluator.DefenderSchedule(
            states=tuple(s for p in multi.plans for s in p.schedule.states)
        )
        util = multi.combined_utility
    elapsed = time.perf_counter() - begin
    return sched.compact(), util, elapsed


def cmd_bench(args) -> int:
    if args.trials < 1:
        raise _CliError(f"--trials must be >= 1, got {args.trials}")
    net = _load_network(args.network)
    mix = _load_strategies(args.strategies, net)
    starts = net.police[: args.defenders] if args.defenders else net.police
    if args.defenders and args.defenders > len(net.police):
        raise _CliError(f"--defenders {args.defenders} exceeds listed police starts")

    if args.parallel:
        with ThreadPoolExecutor() as pool:
            rows = list(pool.map(lambda _: _bench_trial(net, mix, starts), range(args.trials)))
    else:
        rows = [_bench_trial(net, mix, starts) for _ in range(args.trials)]

    oracle_utility = oracle_seconds = None
    if args.oracle:
        begin = time.perf_counter()
        result = evaluator.oracle_best(net, mix, m=len(starts), cap=args.cap)
        oracle_seconds = time.perf_counter() - begin
        oracle_utility = result.utility

    header = f"{'trial':>5}  {'planner utility':>15}  {'seconds':>9}  schedule"
    print(header)
    for idx, (sched, util, secs) in enumerate(rows, start=1):
        print(f"{idx:>5}  {util:>15.6f}  {secs:>9.6f}  {sched}")
    mean_util = sum(r[1] for r in rows) / len(rows)
    mean_secs = sum(r[2] for r in rows) / len(rows)
    print(f"mean planner utility: {mean_util}")
    print(f"mean planner seconds: {mean_secs:.6f}")
    if oracle_utility is not None:
        print(f"oracle utility: {oracle_utility}")
        print(f"oracle seconds: {oracle_seconds:.6f}")

    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(
                ["trial", "schedule", "planner_utility", "planner_seconds",
                 "oracle_utility", "oracle_seconds"]
            )
            for idx, (sched, util, secs) in enumerate(rows, start=1):
                writer.writerow(
                    [idx, sched, repr(util), f"{secs:.6f}",
                     "" if oracle_utility is None else repr(oracle_utility),
                     "" if oracle_seconds is None else f"{oracle_seconds:.6f}"]
                )
    return EXIT_OK


def _model_from_args(args, net: Network, mix: MixedStrategy) -> milp.MilpModel:
    try:
        return milp.build_milp(
            net,
            mix,
            m=args.defenders or len(net.police),
            l_max=args.lmax,
            delta=args.delta,
            big_m=args.bigm,
            exit_occupiable=not args.strict_exit_domain,
        )
    except milp.MilpError as exc:
        raise _CliError(str(exc))


def cmd_export_lp(args) -> int:
    net = _load_network(args.network)
    mix = _load_strategies(args.strategies, net)
    model = _model_from_args(args, net, mix)
    _write_out(args.out, milp.emit_lp(model))
    return EXIT_OK


def cmd_import_solution(args) -> int:
    net = _load_network(args.network)
    mix = _load_strategies(args.strategies, net)
    model = _model_from_args(args, net, mix)
    try:
        text = Path(args.solution).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"cannot read solution file {args.solution}: {exc}")
    try:
        parsed = milp.parse_solution(model, text)
    except milp.SolutionError as exc:
        raise _CliError(str(exc))
    print(f"objective: {parsed.objective}")
    print(f"utility (1 + objective): {parsed.utility}")
    print(f"evaluator utility: {parsed.evaluator_utility}")
    for idx, sched in enumerate(parsed.schedules, start=1):
        print(f"defender {idx} schedule: {sched.compact()}")
    return EXIT_OK


def cmd_export_dot(args) -> int:
    net = _load_network(args.network)
    layered = timexp.build_layered(net)
    costs = None
    if args.strategies:
        mix = _load_strategies(args.strategies, net)
        costs = planner.build_cost_table(layered, mix)
    _write_out(args.out, timexp.export_dot(layered, costs))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="interdict",
        description="Plan defender interdiction schedules on time-expanded road networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_strategies=True):
        p.add_argument("--network", required=True, help="network JSON file")
        if with_strategies:
            p.add_argument("--strategies", required=True, help="attacker strategies JSON file")

    p = sub.add_parser("plan", help="plan defender schedules against a strategy mix")
    add_common(p)
    p.add_argument("--defenders", type=int, default=0, help="use the first N police starts")
    p.add_argument("--out", help="write the plan result JSON here")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("gen-strategies", help="sample random attacker strategies")
    add_common(p, with_strategies=False)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_gen_strategies)

    p = sub.add_parser("evaluate", help="score schedules against a strategy mix")
    add_common(p)
    p.add_argument("--plan", help="plan result JSON produced by `plan`")
    p.add_argument("--schedule", action="append",
                   help="inline schedule 'v,t_in,t_out;v,t_in,t_out;...' (repeatable)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("oracle", help="exact brute-force optimum (small instances)")
    add_common(p)
    p.add_argument("--defenders", type=int, default=1)
    p.add_argument("--cap", type=int, default=evaluator.DEFAULT_ORACLE_CAP)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="repeat planning trials and report timings")
    add_common(p)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--defenders", type=int, default=0)
    p.add_argument("--oracle", action="store_true", help="also run the oracle once")
    p.add_argument("--cap", type=int, default=evaluator.DEFAULT_ORACLE_CAP)
    p.add_argument("--csv", help="write per-trial rows to this CSV file")
    p.add_argument("--parallel", action="store_true", help="run trials concurrently")
    p.set_defaults(func=cmd_bench)

    def add_model_flags(p):
        p.add_argument("--defenders", type=int, default=0)
        p.add_argument("--lmax", type=int, default=None, help="max defender states (default tmax+1)")
        p.add_argument("--delta", type=float, default=1.0, help="wait-time granularity")
        p.add_argument("--bigm", type=float, default=None, help="big-M constant (default tmax+1)")
        group = p.add_mutually_exclusive_group()
        group.add_argument("--strict-exit-domain", dest="strict_exit_domain",
                           action="store_true", default=True,
                           help="defender states exclude exit nodes (default)")
        group.add_argument("--occupiable-exits", dest="strict_exit_domain",
                           action="store_false",
                           help="let defenders occupy exit nodes (reproduces the "
                                "published benchmark optimum)")

    p = sub.add_parser("export-lp", help="write the benchmark MILP as an LP file")
    add_common(p)
    add_model_flags(p)
    p.add_argument("--out", help="output LP file (default stdout)")
    p.set_defaults(func=cmd_export_lp)

    p = sub.add_parser("import-solution", help="read a solver solution for the MILP")
    add_common(p)
    add_model_flags(p)
    p.add_argument("--solution", required=True, help="solution file ('objective v' + 'name v' lines)")
    p.set_defaults(func=cmd_import_solution)

    p = sub.add_parser("export-dot", help="write the layered network as Graphviz DOT")
    p.add_argument("--network", required=True)
    p.add_argument("--strategies", help="annotate nodes with g/h costs for this mix")
    p.add_argument("--out", help="output DOT file (default stdout)")
    p.set_defaults(func=cmd_export_dot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
