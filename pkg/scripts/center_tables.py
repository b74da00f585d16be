#!/usr/bin/env python3
"""Tabulate |Z(A_m) ∩ degree <= d| and |Z(A_m) mod p| for small p, m, d."""

import argparse

from wittquant.chainring import howell_form, reduce_level, span_cardinality
from wittquant.quantization import QuantAlgebraDesc, center_basis


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, nargs="+", default=[3, 5])
    ap.add_argument("--levels", type=int, default=3)
    ap.add_argument("--degree", type=int, default=18)
    args = ap.parse_args()

    print("| p | level | cap | log_p |Z| | log_p |Z mod p| |")
    print("|---|---|---|---|---|")
    for p in args.p:
        alg = QuantAlgebraDesc(p, args.levels)
        for level in range(1, args.levels + 1):
            cb = center_basis(alg, level, args.degree)
            full = span_cardinality(cb.basis)
            low = span_cardinality(howell_form(reduce_level(cb.basis, 1)))
            print(f"| {p} | {level} | {args.degree} | {_log(full, p)} | {_log(low, p)} |")
    return 0


def _log(k: int, p: int) -> int:
    e = 0
    while k > 1:
        k //= p
        e += 1
    return e


if __name__ == "__main__":
    raise SystemExit(main())
