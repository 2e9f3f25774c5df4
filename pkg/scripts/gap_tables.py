"""Gap tables u >= ..., tu_k <= ... for the three families over a parameter grid.

    python scripts/gap_tables.py --max-p 4 --max-q 3 --out results/
"""
import argparse
import csv
import time
from math import gcd
from pathlib import Path

from untwist.bounds import load_tau_facts
from untwist.families import BASES, GAP_COLUMNS, FamilySpec, build_family


def grid(family, max_p, max_q):
    if family == "cable":
        return [(p, q) for p in range(2, max_p + 1) for q in range(1, max_q + 1) if gcd(p, q) == 1]
    return [(p, q) for p in range(1, max_p + 1) for q in range(1, max_q + 1)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--families", nargs="+", default=["cable", "Jpq", "Spq"])
    ap.add_argument("--base", default="trefoil", choices=sorted(BASES))
    ap.add_argument("--tau-facts", default=None)
    ap.add_argument("--max-p", type=int, default=4)
    ap.add_argument("--max-q", type=int, default=3)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()

    base = BASES[args.base]
    tau = load_tau_facts(args.tau_facts).get(base.name) if args.tau_facts else None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for family in args.families:
        path = out / f"gap_{family}_{base.name}.csv"
        with path.open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(GAP_COLUMNS) + ["crossings", "strands", "seconds"])
            w.writeheader()
            for p, q in grid(family, args.max_p, args.max_q):
                t0 = time.perf_counter()
                res = build_family(FamilySpec(family, base, p, q, tau))
                row = res.gap_row()
                row.update(crossings=len(res.braid.letters), strands=res.braid.strand_count,
                           seconds=round(time.perf_counter() - t0, 2))
                w.writerow(row)
                print(" ".join(f"{k}={v}" for k, v in row.items()), flush=True)
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
