#!/usr/bin/env python3
"""List the failures of the lemma-muh implication over F_p[u]/(u^(p^n)).

Every stored witness is replayed before it is printed.
"""

import argparse
from wittquant.harness import ScenarioConfig, replay, run_scenario


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--samples", type=int, default=200, help="used only when the space is too large to enumerate")
    ap.add_argument("--show", type=int, default=5)
    args = ap.parse_args()

    cfg = ScenarioConfig("lemma-muh", p=args.p, n=args.n, samples=args.samples)
    rep = run_scenario(cfg)
    print(f"B = {rep.notes.get('B')}: {rep.cases} instances satisfy the hypothesis, {rep.failures} violate the conclusion")
    for w in rep.witnesses:
        ok, _ = replay(cfg, w)
        assert not ok, "witness did not reproduce"
    for w in rep.witnesses[: args.show]:
        print(f"  z = {w['inputs']['z']}: {w['detail']}")
    if rep.notes.get("witnesses_truncated"):
        print(f"  ({len(rep.witnesses)} witnesses stored and replayed, the rest counted only)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
