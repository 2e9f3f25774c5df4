"""A small table of prime knots used by the tests and the CLI.

Braid words follow the usual table braid representatives; the trefoil and
figure-eight are also given as PD codes.  Both trefoil presentations are
right-handed in the crossing convention of ``knotio``.
"""
from __future__ import annotations

from .knotio import BraidWord, PDCode, parse_braid, parse_pd

__all__ = ["BRAIDS", "PDS", "corpus_knot", "names"]

BRAIDS = {
    "0_1": "1: ",
    "3_1": "2: 1 1 1",
    "4_1": "3: 1 -2 1 -2",
    "5_1": "2: 1 1 1 1 1",
    "5_2": "3: 1 1 1 2 -1 2",
    "6_1": "4: 1 1 2 -1 -3 2 -3",
    "6_2": "3: 1 1 1 -2 1 -2",
    "6_3": "3: 1 1 -2 1 -2 -2",
    "7_1": "2: 1 1 1 1 1 1 1",
    "8_19": "3: 1 1 1 2 1 1 1 2",
}

PDS = {
    "3_1": "X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]",
    "4_1": "X[4,2,5,1], X[8,6,1,5], X[6,3,7,4], X[2,7,3,8]",
}


def names() -> list[str]:
    return list(BRAIDS)


def corpus_knot(name: str, fmt: str = "braid") -> BraidWord | PDCode:
    if fmt == "pd":
        return parse_pd(PDS[name])
    return parse_braid(BRAIDS[name])
