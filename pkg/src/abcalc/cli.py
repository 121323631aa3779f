"""Command-line front end.

Exit codes: 0 success, 1 parse/load/usage error, 2 semantics abort during a
run, 3 a goal check or invariant failed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .casestudies import (
    ORACLES, AllocationSpec, GRAPHS, InconsistentPartners, allocation_scenario,
    blocking_pairs, build_graph_colouring, check_proper_colouring, colouring_rounds,
    conference_scenario, default_spec, dest_inconsistencies, matching, proposal_bound,
    proposal_counts, random_spec, rescuer_count, swarm_scenario, victim_scenario,
)
from .errors import AbcError, LoadError, ParseError, SemanticsAbort
from .explorer import DEFAULT_DEPTH, DEFAULT_STATES, check_invariant, dump_graph, explore
from .parser import Injection, load_program, parse_value
from .printer import pp_system
from .runtime import SCHEDULERS, SimConfig, run

EXIT_OK, EXIT_LOAD, EXIT_ABORT, EXIT_CHECK = 0, 1, 2, 3


def parse_injection(text: str) -> Injection:
    """``step:component:attr=value``."""
    try:
        step, comp, rest = text.split(":", 2)
        attr, value = rest.split("=", 1)
        return Injection(int(step), comp.strip(), attr.strip(), parse_value(value.strip()))
    except (ValueError, ParseError) as exc:
        raise argparse.ArgumentTypeError(
            f"bad injection {text!r}: expected step:component:attr=value ({exc})") from None


def _load(path):
    text = Path(path).read_text(encoding="utf-8")
    return load_program(text)


def _sim_args(p, steps=10_000):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=steps, help="maximum number of transitions")
    p.add_argument("--sched", choices=SCHEDULERS, default="rr")


def _summary(events) -> str:
    sends = sum(1 for e in events if e.kind == "send")
    silent = sum(1 for e in events if e.kind == "silent")
    end = "quiescent" if events and events[-1].kind == "quiescent" else "step limit"
    return f"{sends + silent} steps ({sends} messages, {silent} silent), stopped: {end}"


def cmd_run(args) -> int:
    system, injections = _load(args.file)
    config = SimConfig(args.seed, args.steps, args.sched, args.trace,
                       injections + list(args.inject or []))
    final, events = run(system, config)
    print(_summary(events))
    if args.show:
        print(pp_system(final))
    return EXIT_OK


def cmd_explore(args) -> int:
    system, _ = _load(args.file)
    graph = explore(system, args.depth, args.states)
    ns, ne = len(graph.states), len(graph.edges)
    print(f"{ns} state{'s' if ns != 1 else ''}, {ne} edge{'s' if ne != 1 else ''}")
    print(f"truncated: {'yes' if graph.truncated else 'no'}")
    if args.dump:
        dump_graph(graph, args.dump)
    if args.check:
        cex = check_invariant(graph, ORACLES[args.check])
        if cex is not None:
            print(f"check {args.check}: FAIL")
            print(cex.describe(graph))
            return EXIT_CHECK
        print(f"check {args.check}: pass")
    return EXIT_OK


def cmd_check(args) -> int:
    system, injections = _load(args.file)
    final, events = run(system, SimConfig(args.seed, args.steps, args.sched,
                                          injections=injections))
    print(_summary(events))
    ok = ORACLES[args.oracle](final)
    print(f"{args.oracle}: {'pass' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_CHECK


# ------------------------------------------------------------------- demos


def _demo_colouring(args):
    if args.graph not in GRAPHS:
        raise LoadError(f"unknown graph {args.graph!r}; choose from {', '.join(GRAPHS)}")
    spec = GRAPHS[args.graph]()
    final, events = run(build_graph_colouring(spec), SimConfig(args.seed, args.steps, args.sched))
    ok = check_proper_colouring(final)
    print(f"graph {args.graph}: {len(spec.vertices)} vertices, {len(spec.edges)} edges")
    print("colours: " + ", ".join(f"{c.id}={c.env['colour']}" for c in final.components))
    last = colouring_rounds(events) - 1
    print(f"assigned in round {last}" if last >= 0 else "no vertex assigned")
    print(f"verdict: {'proper colouring' if ok else 'NOT a proper colouring'}")
    return ok, events


def _demo_allocation(args):
    if args.units == 2 and args.clusters == 2 and args.random is False:
        spec = AllocationSpec([("m0", "H"), ("m1", "L")], [("c0", "H"), ("c1", "L")])
    else:
        spec = random_spec(args.units, args.clusters, args.seed)
    system, injections = allocation_scenario(spec)
    final, events = run(system, SimConfig(args.seed, args.steps, args.sched,
                                          injections=injections))
    print("units: " + ", ".join(f"{u}:{d}" for u, d in spec.units))
    print("clusters: " + ", ".join(f"{c}:{r}" for c, r in spec.clusters))
    try:
        pairs = matching(final)
        blocking = blocking_pairs(final)
        ok = not blocking
        print("pairs: " + (", ".join(f"({u},{c})" for u, c in sorted(pairs.items())) or "none"))
        verdict = "stable" if ok else f"UNSTABLE, blocking pairs {blocking}"
    except InconsistentPartners as exc:
        ok, verdict = False, f"INCONSISTENT partners: {exc}"
    counts = proposal_counts(events, spec)
    bound = proposal_bound(len(spec.clusters))
    print("proposals: " + ", ".join(f"{u}={n}" for u, n in counts.items())
          + f" (bound {bound} per unit)")
    ok = ok and all(n <= bound for n in counts.values())
    print(f"verdict: {verdict}")
    return ok, events


def _demo_conference(args):
    system, injections = conference_scenario(default_spec(relocate_at=args.relocate_at))
    final, events = run(system, SimConfig(args.seed, args.steps, args.sched,
                                          injections=injections))
    bad = dest_inconsistencies(final)
    for c in final.components:
        if "dest" in c.env:
            print(f"{c.id}: interest={c.env['interest']!r} dest={c.env['dest']!r}")
    print(f"verdict: {'all dest consistent' if not bad else 'inconsistent: ' + ', '.join(bad)}")
    return not bad, events


def _demo_swarm(args):
    system, injections = swarm_scenario(victim_scenario(args.robots, seed=args.seed))
    final, events = run(system, SimConfig(args.seed, args.steps, args.sched,
                                          injections=injections))
    n = rescuer_count(final)
    print("roles: " + ", ".join(f"{c.id}={c.env['role']}" for c in final.components))
    expected = min(args.robots, 3)
    print(f"verdict: {n} rescuers (expected {expected})")
    return n == expected, events


DEMOS = {"colouring": _demo_colouring, "allocation": _demo_allocation,
         "conference": _demo_conference, "swarm": _demo_swarm}


def cmd_demo(args) -> int:
    ok, events = DEMOS[args.name](args)
    print(_summary(events))
    return EXIT_OK if ok else EXIT_CHECK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="abcalc", description="Run and explore AbC programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate a program")
    p.add_argument("file")
    _sim_args(p)
    p.add_argument("--trace", metavar="PATH", help="write a JSON-lines trace")
    p.add_argument("--inject", action="append", type=parse_injection, metavar="STEP:COMP:ATTR=V",
                   help="scripted attribute change (repeatable)")
    p.add_argument("--show", action="store_true", help="print the final system")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("explore", help="build the bounded transition graph")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--states", type=int, default=DEFAULT_STATES)
    p.add_argument("--check", choices=sorted(ORACLES))
    p.add_argument("--dump", metavar="PATH", help="write the graph as JSON")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("demo", help="run a generated case study")
    p.add_argument("name", choices=sorted(DEMOS))
    _sim_args(p, steps=20_000)
    p.add_argument("--graph", default="k3", help=f"colouring graph: {', '.join(GRAPHS)}")
    p.add_argument("--units", type=int, default=2)
    p.add_argument("--clusters", type=int, default=2)
    p.add_argument("--random", action="store_true",
                   help="allocation: draw demands and ratings from the seed")
    p.add_argument("--relocate-at", type=int, default=None, dest="relocate_at")
    p.add_argument("--robots", type=int, default=4)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("check", help="run a program and evaluate an oracle on the final state")
    p.add_argument("file")
    p.add_argument("--oracle", required=True, choices=sorted(ORACLES))
    _sim_args(p)
    p.set_defaults(func=cmd_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SemanticsAbort as exc:
        print(f"abcalc: semantics abort: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except (AbcError, OSError, ValueError) as exc:
        print(f"abcalc: {exc}", file=sys.stderr)
        return EXIT_LOAD


if __name__ == "__main__":
    sys.exit(main())
