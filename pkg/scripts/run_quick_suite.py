#!/usr/bin/env python3
"""Run a suite profile and write JSON and markdown reports next to each other."""

import argparse
from pathlib import Path

from wittquant.harness import emit_report, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--profile", default="quick", choices=("quick", "full"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--outdir", default="reports")
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    suite = run_suite(args.profile, seed=args.seed, workers=args.workers)
    emit_report(suite, "json", outdir / f"{args.profile}.json")
    emit_report(suite, "markdown", outdir / f"{args.profile}.md")
    for r in suite.reports:
        print(f"{r.verdict:>12}  {r.scenario:28s} p={r.params['p']} n={r.params['n']} cases={r.cases} failures={r.failures}")
    print(f"suite {args.profile}: {suite.verdict} ({suite.elapsed_ms / 1000:.1f}s), reports in {outdir}/")
    return 0 if suite.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
