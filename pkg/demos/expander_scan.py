#!/usr/bin/env python3
"""Scan the norm bound B until the prime-form Cayley graph expands.

For each B on the p+1 grid the script prints the degree (the trivial
eigenvalue), the largest nontrivial |eigenvalue| c, the two-sided gap
delta_2 = 1 - c/k, and the li(B) main term next to its error envelope.

Usage:
    python3 demos/expander_scan.py [-D DISC] [--delta DELTA] [--bound B]
"""

import argparse

from isocayley import abelian, cayley, quadform


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-D", "--disc", type=int, default=-71)
    ap.add_argument("--delta", type=float, default=0.25)
    ap.add_argument("--bound", type=int, default=200)
    args = ap.parse_args()

    cls = quadform.class_group(args.disc)
    sub = abelian.full_subgroup(cls.group)
    print(f"Cl({args.disc}): h = {cls.order}, target two-sided delta >= {args.delta}")
    print()

    best, rows = cayley.find_expander_bound(cls, sub, args.delta, args.bound)
    print(f"{'B':>5} {'deg':>4} {'c':>8} {'delta2':>7} {'li(B)':>9} {'envelope':>9}")
    for r in rows:
        mark = " <- first delta >= target" if r.b == best else ""
        print(f"{r.b:>5} {r.lambda_triv:>4} {r.c:8.4f} {r.delta2:7.4f} "
              f"{r.li_over_index:9.3f} {r.error_envelope:9.1f}{mark}")
    print()
    print(f"smallest expanding bound: B = {best}")
    print()
    print("same table as CSV (what `isocayley spectrum --format csv` writes):")
    print(cayley.scan_table_csv(rows[:6]), end="")


if __name__ == "__main__":
    main()
