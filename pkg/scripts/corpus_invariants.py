"""Invariants and bound intervals for every knot in the built-in table.

    python scripts/corpus_invariants.py > corpus.csv
"""
import csv
import sys

from untwist.blanchfield import n_upper_bound
from untwist.bounds import consolidate, lower_from_alexander, lower_tu_from_sigma, miyazawa_certificate
from untwist.classical import classical_invariants
from untwist.corpus import BRAIDS, corpus_knot
from untwist.jones import jones, miyazawa_left_side


def main():
    cols = ["knot", "alexander", "conway", "det", "sigma", "jones", "v1", "miyazawa",
            "tu_a_lower", "tu_a_upper", "tu_lower"]
    w = csv.DictWriter(sys.stdout, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for name in BRAIDS:
        k = corpus_knot(name)
        inv = classical_invariants(k)
        v = jones(k)
        v1 = miyazawa_left_side(v)
        certs = [lower_from_alexander(str(inv.alexander)), lower_tu_from_sigma(inv.signature)]
        ub = n_upper_bound(v=[list(r) for r in inv.seifert])
        if ub is not None:
            certs.append(ub)
        mz = miyazawa_certificate(v1, inv.a4, inv.signature, inv.determinant) if inv.determinant % 2 else None
        if mz is not None:
            certs.append(mz)
        cons = consolidate(certs)
        w.writerow({
            "knot": name,
            "alexander": str(inv.alexander),
            "conway": inv.conway.format("z"),
            "det": inv.determinant,
            "sigma": inv.signature,
            "jones": v.format("q"),
            "v1": v1,
            "miyazawa": "obstructed" if mz else "-",
            "tu_a_lower": cons.lower("tu_a"),
            "tu_a_upper": cons.upper("tu_a"),
            "tu_lower": cons.lower("tu"),
        })


if __name__ == "__main__":
    main()
