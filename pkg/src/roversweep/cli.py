"""Command-line front end.

Subcommands:
    solve INSTANCE [--emit-schedule PATH] [--json]
    decide INSTANCE --delta D [--json]
    resilience INSTANCE --delta D [--json]
    generate n3dm|partition|random ... [-o PATH]
    verify INSTANCE SCHEDULE [--json]
    oracle INSTANCE [--json]

Exit codes: 0 success / YES / PASS, 1 infeasible / NO / FAIL, 2 usage
errors, malformed input, or a refused exact search.  Output is
deterministic: identical inputs produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Optional

from . import fault_line, multi_line, reductions, ring, single_robot
from .exact import INFINITY, decimal_str, format_number, parse_number
from .instance import (
    FIXED,
    FREE,
    SUBSET,
    InstanceError,
    LineInstance,
    ProblemSpec,
    RingInstance,
    RobotPlacement,
    StarInstance,
    parse_instance,
    serialize_instance,
)
from .oracle import Caps, CapExceeded, brute_solve, verify_schedule
from .schedule import ScheduleError, Verdict, schedule_from_json

USAGE_ERROR = 2


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _say_number(value) -> str:
    return f"{format_number(value)} ({decimal_str(value)})"


def _caps_from(args) -> Caps:
    return Caps(
        max_n=args.max_n if args.max_n is not None else fault_line.FIXED_SEARCH_CAPS.max_n,
        max_k=args.max_k if args.max_k is not None else fault_line.FIXED_SEARCH_CAPS.max_k,
        max_f=fault_line.FIXED_SEARCH_CAPS.max_f,
    )


def _route_solve(spec: ProblemSpec, caps: Caps) -> Verdict:
    top = spec.topology
    pl = spec.placement
    f = spec.faults
    if isinstance(top, LineInstance):
        if pl.mode == FIXED:
            if f == 0:
                if spec.k == 1:
                    return single_robot.solve_fixed_start(top, pl.positions[0])
                return multi_line.solve_fixed(top, pl.positions)
            return fault_line.solve_fixed_faulty(top, pl.positions, f, caps)
        if pl.mode == FREE:
            if f == 0:
                return multi_line.solve_free(top, pl.count)
            return fault_line.solve_free_faulty(top, pl.count, f)
        if pl.mode == SUBSET:
            if spec.k == 1 and f == 0:
                return single_robot.solve_free_start(top, pl.allowed)
            raise InstanceError("robots", "subset placement is solved for a single reliable robot only")
    if isinstance(top, RingInstance):
        if pl.mode == FIXED:
            if f == 0:
                return ring.solve_ring_fixed(top, pl.positions)
            return ring.optimize_ring_fixed_faulty(top, pl.positions, f)
        if pl.mode == FREE:
            if f == 0:
                return ring.solve_ring_free(top, pl.count)
            return ring.solve_ring_free_faulty(top, pl.count, f)
        raise InstanceError("robots", "subset placement is not supported on rings")
    if isinstance(top, StarInstance):
        return reductions.star_exact(top, pl, spec.k, f, spec.bound)
    raise InstanceError("topology", "unsupported topology")


def _route_decide(spec: ProblemSpec, delta, caps: Caps) -> bool:
    top = spec.topology
    pl = spec.placement
    f = spec.faults
    if isinstance(top, RingInstance) and pl.mode == FIXED:
        return ring.decide_ring_fixed_faulty(top, pl.positions, f, delta).feasible
    if isinstance(top, LineInstance) and pl.mode == FIXED and f > 0:
        return fault_line.decide_fixed_faulty(top, pl.positions, f, delta, caps).feasible
    capped = spec.topology.capped(delta)
    capped_spec = ProblemSpec(topology=capped, placement=pl, faults=f, bound=delta)
    verdict = _route_solve(capped_spec, caps)
    return verdict.feasible and verdict.optimum <= delta


def cmd_solve(args) -> int:
    spec = parse_instance(_read(args.instance))
    caps = _caps_from(args)
    verdict = _route_solve(spec, caps)
    if verdict.feasible and spec.bound is not None and verdict.optimum > spec.bound:
        # the optimum is the least certifiable bound, so exceeding the
        # instance's bound means infeasible within it
        verdict = Verdict(feasible=False, optimum=INFINITY)
    if args.emit_schedule and verdict.feasible and verdict.schedule is not None:
        with open(args.emit_schedule, "w", encoding="utf-8") as fh:
            fh.write(verdict.schedule.to_json())
    if args.json:
        doc = {
            "feasible": verdict.feasible,
            "optimum": format_number(verdict.optimum) if verdict.feasible else None,
            "decimal": decimal_str(verdict.optimum) if verdict.feasible else None,
        }
        print(json.dumps(doc, sort_keys=True))
        return 0 if verdict.feasible else 1
    if not verdict.feasible:
        print("infeasible")
        return 1
    print(_say_number(verdict.optimum))
    return 0


def cmd_decide(args) -> int:
    spec = parse_instance(_read(args.instance))
    delta = parse_number(args.delta) if args.delta is not None else spec.bound
    if delta is None:
        print("decide needs --delta or a delta field in the instance", file=sys.stderr)
        return USAGE_ERROR
    answer = _route_decide(spec, delta, _caps_from(args))
    if args.json:
        print(json.dumps({"answer": "YES" if answer else "NO"}))
    else:
        print("YES" if answer else "NO")
    return 0 if answer else 1


def cmd_resilience(args) -> int:
    spec = parse_instance(_read(args.instance))
    delta = parse_number(args.delta) if args.delta is not None else spec.bound
    if delta is None:
        print("resilience needs --delta or a delta field in the instance", file=sys.stderr)
        return USAGE_ERROR
    value = fault_line.resilience(spec, delta, _caps_from(args))
    if args.json:
        print(json.dumps({"resilience": value}))
    else:
        print("none" if value is None else str(value))
    return 0 if value is not None else 1


def cmd_generate(args) -> int:
    if args.kind == "n3dm":
        spec = reductions.line_from_n3dm(
            args.a, args.b, args.c, args.s, sparse=args.sparse
        )
    elif args.kind == "partition":
        spec = reductions.star_from_partition(args.values)
    else:
        spec = _random_instance(args)
    text = serialize_instance(spec)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _random_instance(args) -> ProblemSpec:
    rng = random.Random(args.seed)
    n = args.n
    k = args.k
    f = args.f
    if args.topology == "line":
        coords = [0]
        for _ in range(n - 1):
            coords.append(coords[-1] + rng.randint(1, 4))
        span = coords[-1] if coords[-1] else 1
        deadlines = tuple(
            INFINITY if rng.random() < 0.5 else Fraction(rng.randint(1, 4 * span), rng.choice((1, 2)))
            for _ in range(n)
        )
        top = LineInstance(tuple(coords), deadlines)
    elif args.topology == "ring":
        weights = tuple(rng.randint(1, 4) for _ in range(n))
        total = sum(weights)
        deadlines = tuple(
            INFINITY if rng.random() < 0.5 else Fraction(rng.randint(1, 2 * total), rng.choice((1, 2)))
            for _ in range(n)
        )
        top = RingInstance(weights, deadlines)
    else:
        weights = tuple(rng.randint(1, 5) for _ in range(n))
        bound = 3 * sum(weights)
        deadlines = tuple(
            INFINITY if rng.random() < 0.3 else rng.randint(1, bound) for _ in range(n)
        )
        top = StarInstance(weights, deadlines, INFINITY if rng.random() < 0.5 else rng.randint(1, bound))
    nodes = n if args.topology != "star" else n + 1
    if f > 0:
        positions = tuple(sorted(rng.choice(range(nodes)) for _ in range(k)))
    else:
        positions = tuple(sorted(rng.sample(range(nodes), min(k, nodes))))
    placement = (
        RobotPlacement(FIXED, positions=positions)
        if args.placement == "fixed"
        else RobotPlacement(FREE, count=k)
    )
    return ProblemSpec(topology=top, placement=placement, faults=f, bound=None)


def cmd_verify(args) -> int:
    spec = parse_instance(_read(args.instance))
    schedule = schedule_from_json(_read(args.schedule))
    report = verify_schedule(spec, schedule)
    if args.json:
        doc = {
            "passed": report.passed,
            "makespan": format_number(report.makespan),
            "first_violation": report.first_violation.node if report.first_violation else None,
        }
        print(json.dumps(doc, sort_keys=True))
        return 0 if report.passed else 1
    if report.passed:
        print(f"PASS makespan={_say_number(report.makespan)}")
        return 0
    bad = report.first_violation
    print(f"FAIL node={bad.node} covered={bad.covered} required={bad.required}")
    return 1


def cmd_oracle(args) -> int:
    spec = parse_instance(_read(args.instance))
    caps = Caps(
        max_n=args.max_n if args.max_n is not None else Caps().max_n,
        max_k=args.max_k if args.max_k is not None else Caps().max_k,
        max_f=Caps().max_f,
    )
    if isinstance(spec.topology, StarInstance):
        verdict = reductions.star_exact(
            spec.topology, spec.placement, spec.k, spec.faults, spec.bound
        )
    else:
        verdict = brute_solve(spec, caps)
    if args.json:
        doc = {
            "feasible": verdict.feasible,
            "optimum": format_number(verdict.optimum) if verdict.feasible else None,
        }
        print(json.dumps(doc, sort_keys=True))
        return 0 if verdict.feasible else 1
    if not verdict.feasible:
        print("infeasible")
        return 1
    print(_say_number(verdict.optimum))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roversweep",
        description="Exact deadline-constrained exploration solvers for lines, rings and stars.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_caps(p):
        p.add_argument("--max-n", type=int, default=None, help="override the exact-search node cap")
        p.add_argument("--max-k", type=int, default=None, help="override the exact-search robot cap")

    p_solve = sub.add_parser("solve", help="optimal exploration time")
    p_solve.add_argument("instance")
    p_solve.add_argument("--emit-schedule", metavar="PATH")
    p_solve.add_argument("--json", action="store_true")
    add_caps(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_dec = sub.add_parser("decide", help="is exploration possible within --delta")
    p_dec.add_argument("instance")
    p_dec.add_argument("--delta")
    p_dec.add_argument("--json", action="store_true")
    add_caps(p_dec)
    p_dec.set_defaults(func=cmd_decide)

    p_res = sub.add_parser("resilience", help="largest tolerable number of crashes within --delta")
    p_res.add_argument("instance")
    p_res.add_argument("--delta")
    p_res.add_argument("--json", action="store_true")
    add_caps(p_res)
    p_res.set_defaults(func=cmd_resilience)

    p_gen = sub.add_parser("generate", help="emit instance documents")
    gen_sub = p_gen.add_subparsers(dest="kind", required=True)
    g_n3dm = gen_sub.add_parser("n3dm", help="matching reduction onto a faulty line decision")
    g_n3dm.add_argument("--a", type=int, nargs="+", required=True)
    g_n3dm.add_argument("--b", type=int, nargs="+", required=True)
    g_n3dm.add_argument("--c", type=int, nargs="+", required=True)
    g_n3dm.add_argument("--s", type=int, required=True)
    g_n3dm.add_argument("--sparse", action="store_true")
    g_n3dm.add_argument("-o", "--output")
    g_n3dm.set_defaults(func=cmd_generate)
    g_part = gen_sub.add_parser("partition", help="Partition reduction onto a two-robot star")
    g_part.add_argument("--values", type=int, nargs="+", required=True)
    g_part.add_argument("-o", "--output")
    g_part.set_defaults(func=cmd_generate)
    g_rand = gen_sub.add_parser("random", help="seeded random instance")
    g_rand.add_argument("--topology", choices=("line", "ring", "star"), default="line")
    g_rand.add_argument("--n", type=int, default=6)
    g_rand.add_argument("--k", type=int, default=2)
    g_rand.add_argument("--f", type=int, default=0)
    g_rand.add_argument("--placement", choices=("fixed", "free"), default="fixed")
    g_rand.add_argument("--seed", type=int, default=0)
    g_rand.add_argument("-o", "--output")
    g_rand.set_defaults(func=cmd_generate)

    p_ver = sub.add_parser("verify", help="check a schedule against an instance")
    p_ver.add_argument("instance")
    p_ver.add_argument("schedule")
    p_ver.add_argument("--json", action="store_true")
    p_ver.set_defaults(func=cmd_verify)

    p_orc = sub.add_parser("oracle", help="brute-force verdict (capped)")
    p_orc.add_argument("instance")
    p_orc.add_argument("--json", action="store_true")
    add_caps(p_orc)
    p_orc.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, ScheduleError, CapExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
