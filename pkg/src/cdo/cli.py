"""``cdo`` command line.

Exit codes: 0 success, 1 usage or input error, 2 infeasible instance,
3 a solve (or some benchmark instance) hit its time limit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from cdo import io
from cdo.core import Agenda, CdoError, CdoInstance, InfeasibleError, Profile
from cdo.domains import (
    ballot_from_partial_order,
    encode_budget,
    encode_schedule,
    encode_spanning_tree,
)
from cdo.equiv import CHECKS, check_equivalence
from cdo.harness import (
    DEFAULT_P,
    DEFAULT_RULES,
    RANK_RULES,
    BenchConfig,
    BaseProfile,
    default_seed,
    gen_base_profile,
    gen_connected_graph,
    plot_mean_times,
    run_benchmark,
    threshold_profile,
    write_csv,
    write_summary,
)
from cdo.rules import DEFAULT_WINNER_CAP, RuleSpec, apply_rule
from cdo.scoring import Scoring
from cdo.solver import SolveTimeout, encode_rule, export_lp

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_TIMEOUT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 means "infeasible" here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rule(args) -> RuleSpec:
    text = args.rule
    if ":" not in text:
        if not args.scoring:
            raise CdoError("give --rule operator:scoring or --rule operator --scoring kind")
        text = f"{text}:{args.scoring}"
    elif args.scoring and RuleSpec.parse(text).scoring != Scoring.parse(args.scoring):
        raise CdoError("--scoring disagrees with the scoring inside --rule")
    return RuleSpec.parse(text)


def _load_instance(args) -> CdoInstance:
    inst = io.load_instance(args.instance)
    if getattr(args, "budget", None) is not None:
        cs = encode_budget(inst.agenda, args.budget, inst.feasibility.constraints)
        inst = inst.with_feasibility(cs.extended(aux=inst.feasibility.aux))
    return inst


def _write_or_print(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands ---------------------------------------------------------------------

def cmd_solve(args) -> int:
    rule = _rule(args)
    inst = _load_instance(args)
    deadline = time.monotonic() + args.timeout if args.timeout else None
    kw = {}
    if rule.operator != "rank":
        kw = dict(method=args.method, winner_cap=args.cap, deadline=deadline)
    res = apply_rule(rule, inst, "one" if args.one else "all", **kw)
    if args.output:
        doc = io.outcomes_to_dict(res.outcomes, rule=str(rule), optimum=res.optimum)
        if res.trace is not None:
            doc["trace"] = [{"item": a, "accepted": ok} for a, ok in res.trace]
        Path(args.output).write_text(json.dumps(doc, indent=1) + "\n")
    items = inst.agenda.items
    print(f"rule: {rule}")
    print(f"optimum: {res.optimum}")
    print(f"outcomes: {len(res.outcomes)}")
    for o in res.outcomes:
        accepted = [a for a, b in zip(items, o.bits) if b]
        print(f"  {''.join(map(str, o.bits))}  {{{', '.join(accepted)}}}")
    if rule.operator != "rank" and len(res.outcomes) == args.cap and not args.one:
        print(f"note: stopped at the co-winner cap of {args.cap}", file=sys.stderr)
    if res.trace is not None:
        print("trace:")
        for step, (a, ok) in enumerate(res.trace, 1):
            print(f"  {step:>3}. {a}: {'accept' if ok else 'reject'}")
    return EXIT_OK


def cmd_encode(args) -> int:
    if args.domain == "budget":
        inst = io.load_instance(args.input)
        if args.budget is None:
            raise CdoError("encode budget needs --budget")
        cs = encode_budget(inst.agenda, args.budget, inst.feasibility.constraints)
        inst = inst.with_feasibility(cs.extended(aux=inst.feasibility.aux))
    elif args.domain == "tree":
        graph = io.read_graph(args.input)
        agenda, cs = encode_spanning_tree(graph)
        profile = (io.load_instance(args.profile).profile if args.profile
                   else Profile([], num_items=agenda.m))
        inst = CdoInstance(agenda, profile, cs)
    else:
        spec, voters = io.load_schedule(args.input)
        agenda, cs = encode_schedule(spec)
        ballots = [ballot_from_partial_order(spec, v.get("before", ()), v.get("first", ()))
                   for v in voters]
        inst = CdoInstance(agenda, Profile(ballots, num_items=agenda.m), cs)
    _write_or_print(json.dumps(io.instance_to_dict(inst), indent=1) + "\n", args.output)
    return EXIT_OK


def cmd_export_ilp(args) -> int:
    rule = _rule(args)
    if rule.operator == "rank":
        raise CdoError("rank is a greedy procedure and has no single ILP model")
    model = encode_rule(rule.operator, rule.scoring, _load_instance(args))
    _write_or_print(export_lp(model), args.output)
    return EXIT_OK


def cmd_gen_graph(args) -> int:
    graph = gen_connected_graph(args.nodes, args.edges, args.seed)
    _write_or_print(io.format_graph(graph), args.output)
    return EXIT_OK


def cmd_gen_profile(args) -> int:
    if args.graph:
        graph = io.read_graph(args.graph)
        agenda, cs = encode_spanning_tree(graph)
    else:
        if args.items is None:
            raise CdoError("gen-profile needs --items or --graph")
        agenda, cs = Agenda([f"a{k}" for k in range(1, args.items + 1)]), None
    bp: BaseProfile = gen_base_profile(args.voters, agenda.m, args.seed)
    profile = threshold_profile(bp, args.p)
    inst = CdoInstance(agenda, profile, cs) if cs is not None else CdoInstance(agenda, profile)
    _write_or_print(json.dumps(io.instance_to_dict(inst), indent=1) + "\n", args.output)
    return EXIT_OK


def cmd_bench(args) -> int:
    rules = tuple(args.rules or DEFAULT_RULES)
    if args.include_rank:
        rules += tuple(r for r in RANK_RULES if r not in rules)
    cfg = BenchConfig(node_range=tuple(args.nodes), voters=args.voters,
                      profiles_per_graph=args.profiles, p_values=tuple(args.p or DEFAULT_P),
                      rules=rules, timeout=args.timeout, seed=args.seed, workers=args.workers)
    total = cfg.grid_size() * len(rules)
    done = 0

    def progress(batch):
        nonlocal done
        done += len(batch)
        if not args.quiet:
            print(f"{done}/{total}", file=sys.stderr, flush=True)

    records = run_benchmark(cfg, progress)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(records, out)
    if args.summary:
        write_summary(records, args.summary)
    if args.plot:
        plot_mean_times(records, args.plot)
    timeouts = sum(r.timed_out for r in records)
    print(f"{len(records)} records written to {out}; {timeouts} timed out")
    return EXIT_TIMEOUT if timeouts else EXIT_OK


def cmd_check_equiv(args) -> int:
    whiches = CHECKS if args.which == "all" else (args.which,)
    ok = True
    for which in whiches:
        rep = check_equivalence(which, args.trials, args.seed)
        status = "PASS" if rep.passed else "FAIL"
        print(f"{which}: {status} ({args.trials - len(rep.failures)}/{args.trials})")
        for bad in rep.failures[: args.max_dump]:
            print(json.dumps(bad, default=list))
        ok &= rep.passed
    return EXIT_OK if ok else EXIT_USAGE


# -- parser ----------------------------------------------------------------------------

def _add_rule_args(p) -> None:
    p.add_argument("--rule", required=True, help="operator:scoring, e.g. sum:w-swap")
    p.add_argument("--scoring", help="scoring kind when --rule names only the operator")
    p.add_argument("--instance", required=True, help="instance JSON file")
    p.add_argument("--budget", type=int, help="add a knapsack row sum(w*x) <= BUDGET")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cdo", description="Collective discrete optimisation rules.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="apply a rule to an instance")
    _add_rule_args(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--all", action="store_true", help="every optimal outcome (default)")
    g.add_argument("--one", action="store_true", help="a single optimal outcome")
    p.add_argument("--method", choices=("auto", "enumerate", "bnb"), default="auto")
    p.add_argument("--cap", type=int, default=DEFAULT_WINNER_CAP, help="co-winner cap")
    p.add_argument("--timeout", type=float, help="seconds")
    p.add_argument("-o", "--output", help="write outcomes as JSON")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("encode", help="turn a domain description into an instance file")
    p.add_argument("domain", choices=("budget", "tree", "schedule"))
    p.add_argument("input", help="instance JSON (budget), graph file (tree) or schedule JSON")
    p.add_argument("--budget", type=int)
    p.add_argument("--profile", help="tree: take the voters from this instance file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("export-ilp", help="write the rule's 0/1 model in LP format")
    _add_rule_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_ilp)

    p = sub.add_parser("gen-graph", help="random connected graph")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--seed", type=int, default=default_seed())
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen_graph)

    p = sub.add_parser("gen-profile", help="random thresholded approval profile")
    p.add_argument("--voters", type=int, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--items", type=int)
    src.add_argument("--graph", help="graph file; items are its edges")
    p.add_argument("--p", type=float, required=True, help="approval threshold in (0, 1)")
    p.add_argument("--seed", type=int, default=default_seed())
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen_profile)

    p = sub.add_parser("bench", help="collective spanning-tree benchmark")
    p.add_argument("--nodes", type=int, nargs=2, default=(6, 8), metavar=("LO", "HI"))
    p.add_argument("--voters", type=int, default=100)
    p.add_argument("--profiles", type=int, default=10)
    p.add_argument("--p", type=float, nargs="+")
    p.add_argument("--rules", nargs="+")
    p.add_argument("--include-rank", action="store_true")
    p.add_argument("--timeout", type=float, default=1200.0)
    p.add_argument("--seed", type=int, default=default_seed())
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="bench.csv")
    p.add_argument("--summary")
    p.add_argument("--plot", help="SVG/PNG of mean time against |V|")
    p.add_argument("-q", "--quiet", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("check-equiv", help="random tests of the JA translations")
    p.add_argument("--which", choices=(*CHECKS, "all"), default="all")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=default_seed())
    p.add_argument("--max-dump", type=int, default=5)
    p.set_defaults(func=cmd_check_equiv)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SolveTimeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except (CdoError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
