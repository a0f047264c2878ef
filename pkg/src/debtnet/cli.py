"""Command-line interface.

Exit codes: 0 success, 2 bad input, 3 an exhaustive search refused to run
(instance too large), 4 a numeric procedure failed (no convergence, singular
system).
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Sequence

from . import generators, io, scenarios
from .analytics import extended_threat_index
from .bailout import greedy_injections, optimal_injections_enumerative, optimal_injections_lp
from .clearing import greatest_clearing, least_clearing
from .debt_relief import KINDS, RemovalObjective, greedy_removal, optimal_removal
from .errors import ConvergenceError, DebtNetError, GuardError, SingularSystemError
from .games import Cycle, Equilibrium, Game, PolicySpec
from .network import FinancialNetwork, require_valid

EXIT_OK, EXIT_INPUT, EXIT_GUARD, EXIT_NUMERIC = 0, 2, 3, 4


def _load(args) -> FinancialNetwork:
    path = Path(args.file)
    text = sys.stdin.read() if args.file == "-" else path.read_text()
    net = io.parse_network(text, exact=not args.float)
    require_valid(net)
    return net


def _bank(net: FinancialNetwork, label: str) -> int:
    labels = net.bank_labels()
    if label not in labels:
        raise io.ParseError(f"unknown bank id {label!r}")
    return labels.index(label)


def cmd_clear(args) -> dict:
    net = _load(args)
    res = least_clearing(net) if args.least else greatest_clearing(net)
    report = io.clearing_report(net, res)
    report["clearing"] = "least" if args.least else "greatest"
    if not args.least:
        report["threat_index"] = {net.label(i): io.scalar(m) for i, m in enumerate(extended_threat_index(net, res))}
    return report


def cmd_inject(args) -> dict:
    net = _load(args)
    before = greatest_clearing(net)
    report: dict = {"policy": args.policy, "budget": args.budget}
    if args.policy == "greedy":
        plan, trace, after = greedy_injections(net, args.budget)
        report["trace"] = [
            {
                "bank": net.label(r.bank),
                "amount": io.scalar(r.amount),
                "threat_index": [io.scalar(m) for m in r.threat],
            }
            for r in trace
        ]
    elif args.policy == "optimal":
        plan, after = optimal_injections_lp(net, args.budget)
    else:
        plan, after = optimal_injections_enumerative(net, args.budget)
    report["plan"] = io.transfers_report(net, plan.transfers)
    report["liquidity_before"] = io.scalar(before.liquidity)
    report["liquidity_increase"] = io.scalar(after.liquidity - before.liquidity)
    report["clearing"] = io.clearing_report(net, after)
    return report


def cmd_remove_debt(args) -> dict:
    net = _load(args)
    if args.objective == "greedy":
        removed, res = greedy_removal(net)
        value = res.liquidity
    else:
        target = _bank(net, args.target) if args.target is not None else None
        try:
            obj = RemovalObjective(args.objective, target)
        except ValueError as exc:
            raise io.ParseError(str(exc)) from None
        removed, res, value = optimal_removal(net, obj)
    return {
        "objective": args.objective,
        "removed": [{"from": net.label(i), "to": net.label(j), "amount": io.scalar(net.liabilities[i][j])} for i, j in removed],
        "value": io.scalar(value),
        "clearing": io.clearing_report(net, res),
    }


def cmd_game(args) -> dict:
    net = _load(args)
    game = Game(net, PolicySpec.parse(args.policy))
    fmt = lambda p: io.format_profile(net, p)  # noqa: E731
    report: dict = {"policy": args.policy}
    if args.dynamics:
        start = io.parse_profile(net, args.start) if args.start else None
        out = game.br_dynamics(start, args.max_steps)
        if isinstance(out, Equilibrium):
            report.update(outcome="equilibrium", profile=fmt(out.profile), moves=out.moves)
        elif isinstance(out, Cycle):
            report.update(outcome="cycle", cycle=[fmt(p) for p in out.profiles])
        else:
            report.update(outcome="truncated", profile=fmt(out.profile), moves=out.moves)
    elif args.enumerate:
        eqs = game.enumerate_equilibria()
        report["equilibria"] = [
            {"profile": fmt(p), "liquidity": io.scalar(game.outcome(p).liquidity)} for p in eqs
        ]
    else:
        r = game.quality_report()
        report.update(
            equilibria=[fmt(p) for p in r.equilibria],
            f_original=io.scalar(r.f_original),
            f_optimal=io.scalar(r.f_optimal),
            f_worst_eq=io.scalar(r.f_worst_eq),
            f_best_eq=io.scalar(r.f_best_eq),
            poa=io.scalar(r.poa),
            pos=io.scalar(r.pos),
            eoa=io.scalar(r.eoa),
            eos=io.scalar(r.eos),
        )
        if r.cycle is not None:
            report["cycle"] = [fmt(p) for p in r.cycle]
    return report


def _emit(text: str, target: str | None) -> None:
    if target in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)


def cmd_scenario(args) -> dict | None:
    if args.list or not args.name:
        return {
            name: {"parameters": d.defaults, "summary": d.summary, "facts": [f"{f.description} [{f.source}]" for f in d.facts]}
            for name, d in scenarios.SCENARIOS.items()
        }
    params = {}
    for item in args.params:
        key, sep, value = item.partition("=")
        if not sep:
            raise io.ParseError(f"parameter {item!r} must look like key=value")
        params[key] = value
    net = scenarios.build(args.name, **params)
    if args.verify:
        failed = scenarios.verify(args.name, **params)
        return {"scenario": args.name, "verified": not failed, "failed": failed}
    _emit(io.serialize_network(net), args.emit)
    return None


def cmd_random(args) -> None:
    rng = random.Random(args.seed)
    if args.kind == "tree":
        net = generators.random_tree(rng, args.banks, args.max_amount, args.alpha, args.beta)
    elif args.kind == "cycle":
        net = generators.random_cycle(rng, args.banks, args.max_amount, args.alpha, args.beta)
    else:
        net = generators.random_network(rng, args.banks, args.max_amount, args.density, args.alpha, args.beta)
    _emit(io.serialize_network(net), args.emit)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="debtnet", description="Clearing, bailouts and debt-forgiveness games on financial networks.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(sp):
        sp.add_argument("file", help="network document (JSON), or - for stdin")
        sp.add_argument("--float", action="store_true", help="use floating point instead of exact rationals")
        return sp

    c = with_file(sub.add_parser("clear", help="clearing payments"))
    c.add_argument("--least", action="store_true", help="least instead of greatest clearing")
    c.set_defaults(func=cmd_clear)

    c = with_file(sub.add_parser("inject", help="plan cash injections"))
    c.add_argument("--budget", required=True)
    c.add_argument("--policy", choices=("greedy", "optimal", "enumerative"), default="greedy")
    c.set_defaults(func=cmd_inject)

    c = with_file(sub.add_parser("remove-debt", help="choose debts to forgive"))
    c.add_argument("--objective", choices=KINDS + ("greedy",), default="max-liquidity")
    c.add_argument("--target", help="bank id for min-forgiven-target-solvent")
    c.set_defaults(func=cmd_remove_debt)

    c = with_file(sub.add_parser("game", help="edge-removal game analysis"))
    c.add_argument("--policy", default="none", help="none, greedy:M or optimal:M")
    mode = c.add_mutually_exclusive_group(required=True)
    mode.add_argument("--dynamics", action="store_true", help="run best-response dynamics")
    mode.add_argument("--enumerate", action="store_true", help="list all pure equilibria")
    mode.add_argument("--report", action="store_true", help="equilibria plus PoA, PoS, EoA, EoS")
    c.add_argument("--start", help="starting profile, e.g. 'v1<-v4;v2<-v3,v4'")
    c.add_argument("--max-steps", type=int, default=1000)
    c.set_defaults(func=cmd_game)

    c = sub.add_parser("scenario", help="emit a named example network")
    c.add_argument("name", nargs="?")
    c.add_argument("params", nargs="*", help="key=value parameters")
    c.add_argument("--emit", help="output file (default stdout)")
    c.add_argument("--list", action="store_true", help="list scenarios and their facts")
    c.add_argument("--verify", action="store_true", help="check the scenario's recorded facts")
    c.set_defaults(func=cmd_scenario)

    c = sub.add_parser("random-network", help="emit a seeded random network")
    c.add_argument("--seed", type=int, default=generators.DEFAULT_SEED)
    c.add_argument("--banks", type=int, default=5)
    c.add_argument("--max-amount", type=int, default=10)
    c.add_argument("--density", type=float, default=0.4)
    c.add_argument("--alpha", default="1")
    c.add_argument("--beta", default="1")
    c.add_argument("--kind", choices=("general", "tree", "cycle"), default="general")
    c.add_argument("--emit", help="output file (default stdout)")
    c.set_defaults(func=cmd_random)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        report = args.func(args)
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ConvergenceError, SingularSystemError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DebtNetError, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if report is not None:
        sys.stdout.write(io.dumps(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
