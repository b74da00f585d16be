"""Command line entry point: ``wittquant run | suite | eval | list``."""

from __future__ import annotations

import argparse
import ast
import sys

from . import expr
from .harness import (
    REGISTRY,
    ConfigError,
    ScenarioConfig,
    emit_report,
    load_config,
    run_scenario,
    run_suite,
)
from .quantization import QuantAlgebraDesc
from .witt import WittVector

FLAG_FIELDS = ("p", "n", "r", "degree", "component_degree", "terms", "seed", "samples", "length")


def _add_mutations(ap: argparse.ArgumentParser):
    ap.add_argument("--flip-relation", action="store_true", help="use [y, x] = -1 in the Weyl algebra")
    ap.add_argument("--flip-pairing", action="store_true", help="use {u, v} = -1 on the centre")


def _add_output(ap: argparse.ArgumentParser):
    ap.add_argument("--out", help="write the report to this path")
    ap.add_argument("--format", choices=("json", "markdown"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wittquant", description="Seeded exact checks for Witt vectors and the Weyl algebra over Z/p^n.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario")
    run.add_argument("scenario")
    run.add_argument("--config", help="JSON file with the same keys as the flags")
    run.add_argument("--p", type=int)
    run.add_argument("--n", type=int)
    run.add_argument("--r", type=int)
    run.add_argument("--degree", type=int, help="degree cap for truncated computations")
    run.add_argument("--component-degree", type=int, help="degree bound for sampled components")
    run.add_argument("--terms", type=int, help="term-count bound for sampled components")
    run.add_argument("--seed", type=int)
    run.add_argument("--samples", type=int)
    run.add_argument("--length", type=int, help="Witt length m")
    run.add_argument("--monomial", help="exponents of the monomial generating m, e.g. 1,0")
    run.add_argument("--generator", action="append", dest="generators", help="Weyl generator (repeatable)")
    _add_mutations(run)
    _add_output(run)

    suite = sub.add_parser("suite", help="run a profile of scenarios")
    suite.add_argument("--profile", choices=("quick", "full"), default="quick")
    suite.add_argument("--only", nargs="+", help="restrict to these scenarios")
    suite.add_argument("--seed", type=int, default=0)
    suite.add_argument("--workers", type=int, default=1)
    _add_mutations(suite)
    _add_output(suite)

    ev = sub.add_parser("eval", help="evaluate an element expression")
    ev.add_argument("expr")
    ev.add_argument("--p", type=int, default=3)
    ev.add_argument("--n", type=int, default=2)
    ev.add_argument("--r", type=int, default=1)
    ev.add_argument("--level", type=int)
    ev.add_argument("--kind", choices=("auto", "weyl", "center", "witt"), default="auto")

    sub.add_parser("list", help="list registered scenarios")
    return ap


def _config_from_args(args) -> ScenarioConfig:
    data = load_config(args.config) if args.config else {}
    data["scenario"] = args.scenario
    for key in FLAG_FIELDS:
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    if args.monomial:
        data["monomial"] = [int(t) for t in args.monomial.split(",")]
    if args.generators:
        data["generators"] = args.generators
    if args.flip_relation:
        data["relation_sign"] = -1
    if args.flip_pairing:
        data["pairing_sign"] = -1
    return ScenarioConfig.from_dict(data)


def _emit(report, args) -> None:
    text = emit_report(report, args.format, args.out)
    if not args.out:
        sys.stdout.write(text)
    else:
        print(f"{report.verdict}: report written to {args.out}", file=sys.stderr)


def _eval(args) -> str:
    alg = QuantAlgebraDesc(args.p, args.n, args.r)
    kind = args.kind
    if kind == "auto":
        names = set(alg.variables)
        kind = "weyl" if expr_names(args.expr) & names else ("witt" if args.expr.strip().startswith("[") else "center")
    if kind == "weyl":
        return alg.parse(args.expr, args.level or args.n).to_text()
    ring = alg.center_ring()
    if kind == "witt":
        return str(WittVector.parse(ring, args.expr, args.p))
    return str(ring.parse(args.expr))


def expr_names(text: str) -> set[str]:
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise expr.ParseError(str(exc)) from None
    return {node.id for node in ast.walk(tree) if isinstance(node, ast.Name)}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            for name in sorted(REGISTRY):
                sc = REGISTRY[name]
                print(f"{name:28s} [{sc.polarity}] {sc.statement}")
            return 0
        if args.command == "eval":
            print(_eval(args))
            return 0
        if args.command == "run":
            report = run_scenario(_config_from_args(args))
        else:
            overrides = {}
            if args.flip_relation:
                overrides["relation_sign"] = -1
            if args.flip_pairing:
                overrides["pairing_sign"] = -1
            report = run_suite(args.profile, only=args.only, overrides=overrides, seed=args.seed, workers=args.workers)
        _emit(report, args)
        return 0 if report.passed else 1
    except (ConfigError, expr.ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
