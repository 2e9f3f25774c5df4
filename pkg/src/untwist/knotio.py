"""Knot diagrams: PD codes, braid words, and the diagram-level constructions
(mirror, connected sum, cabling, full-twist insertion).

PD convention: each crossing ``X[a,b,c,d]`` lists its four edge labels
counterclockwise starting from the incoming under-strand, so ``a -> c`` is
the under-strand.  A crossing is positive when the over-strand runs
``d -> b`` (right-handed: over-strand from bottom-left to top-right when
both strands point up).  Braid letter ``i`` is a positive crossing of
strands ``i, i+1`` in which the left strand passes over.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd
from typing import Hashable, Iterable, Sequence

__all__ = [
    "DiagramError",
    "PDCode",
    "BraidWord",
    "TwistRegion",
    "parse_pd",
    "parse_braid",
    "parse_knot",
    "braid_closure_to_pd",
    "mirror",
    "connected_sum",
    "braid_connected_sum",
    "split_braid_sum",
    "cable_braid",
    "cable_twist_region",
    "insert_full_twist",
    "twist_word",
    "block_crossing",
    "full_twist",
    "free_reduce",
    "StripBuilder",
]


class DiagramError(ValueError):
    """Malformed or unsupported diagram input."""


# ---------------------------------------------------------------------------
# PD codes
# ---------------------------------------------------------------------------

def _orient(crossings: Sequence[Sequence[Hashable]]):
    """Return (incoming, components): incoming[c][s] is True when slot s of
    crossing c carries the strand into the crossing; components is a list of
    edge-label cycles in traversal order."""
    where: dict = {}
    for ci, x in enumerate(crossings):
        for s, e in enumerate(x):
            where.setdefault(e, []).append((ci, s))

    def partner(ci, s):
        a, b = where[crossings[ci][s]]
        return b if a == (ci, s) else a

    incoming = [[None] * 4 for _ in crossings]
    components = []

    def walk(ci, s):
        # (ci, s) is an incoming slot; follow the strand until it closes
        comp = []
        while incoming[ci][s] is None:
            incoming[ci][s] = True
            o = (s + 2) % 4
            if incoming[ci][o] is True:
                raise DiagramError("inconsistent orientation in PD code")
            incoming[ci][o] = False
            comp.append(crossings[ci][o])
            ci, s = partner(ci, o)
        if incoming[ci][s] is not True:
            raise DiagramError("inconsistent orientation in PD code")
        components.append(comp)

    for ci in range(len(crossings)):
        if incoming[ci][0] is None:
            walk(ci, 0)
        elif incoming[ci][0] is False:
            raise DiagramError("inconsistent orientation in PD code")
    # components that never pass under: orient by label succession
    for ci, x in enumerate(crossings):
        if incoming[ci][1] is None:
            b, d = x[1], x[3]
            walk(ci, 3 if _label_follows(b, d, len(crossings)) else 1)
    return incoming, components


def _label_follows(b, d, n):
    try:
        return (b - d) % (2 * n) == 1
    except TypeError:
        return False


@dataclass(frozen=True)
class PDCode:
    """Validated planar diagram code.

    ``crossings`` holds 4-tuples of positive edge labels.  Labels run over
    ``1..2n`` and follow the orientation (edge ``k`` is followed by ``k+1``
    along each component); use ``PDCode.from_raw`` to build one from any
    hashable edge identifiers.
    """

    crossings: tuple[tuple[int, int, int, int], ...]
    allow_link: bool = field(default=False, compare=False)

    def __post_init__(self):
        xs = tuple(tuple(int(e) for e in x) for x in self.crossings)
        object.__setattr__(self, "crossings", xs)
        for x in xs:
            if len(x) != 4:
                raise DiagramError(f"crossing {x} does not have four edges")
        counts: dict[int, int] = {}
        for x in xs:
            for e in x:
                counts[e] = counts.get(e, 0) + 1
        bad = sorted(e for e, c in counts.items() if c != 2)
        if bad:
            raise DiagramError(f"edge label(s) {bad} do not occur exactly twice")
        if xs and sorted(counts) != list(range(1, 2 * len(xs) + 1)):
            raise DiagramError("edge labels must be exactly 1..2n")
        incoming, comps = _orient(xs)
        object.__setattr__(self, "_incoming", tuple(tuple(r) for r in incoming))
        object.__setattr__(self, "_components", tuple(tuple(c) for c in comps))
        if not self.allow_link and len(comps) > 1:
            raise DiagramError(f"diagram has {len(comps)} components, expected a knot")

    @classmethod
    def from_raw(cls, crossings: Iterable[Sequence[Hashable]], allow_link: bool = False) -> "PDCode":
        """Relabel arbitrary edge ids to 1..2n along the orientation.  The
        crossing order is preserved."""
        xs = [tuple(x) for x in crossings]
        counts: dict = {}
        for x in xs:
            for e in x:
                counts[e] = counts.get(e, 0) + 1
        bad = [e for e, c in counts.items() if c != 2]
        if bad:
            raise DiagramError(f"edge id(s) {bad} do not occur exactly twice")
        _, comps = _orient(xs)
        relabel = {}
        for comp in comps:
            for e in comp:
                relabel[e] = len(relabel) + 1
        return cls(tuple(tuple(relabel[e] for e in x) for x in xs), allow_link=allow_link)

    # -- derived data ---------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def component_count(self) -> int:
        return len(self._components) if self.crossings else 1

    @property
    def components(self) -> tuple[tuple[int, ...], ...]:
        return self._components

    def is_incoming(self, c: int, s: int) -> bool:
        return self._incoming[c][s]

    def sign(self, c: int) -> int:
        """+1 when the over-strand runs from slot 3 to slot 1."""
        return 1 if self._incoming[c][3] else -1

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(self.sign(c) for c in range(self.n))

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def edge_slots(self) -> dict[int, list[tuple[int, int]]]:
        where: dict[int, list] = {}
        for ci, x in enumerate(self.crossings):
            for s, e in enumerate(x):
                where.setdefault(e, []).append((ci, s))
        return where

    def to_text(self) -> str:
        return " ".join("X[" + ",".join(map(str, x)) + "]" for x in self.crossings)

    def __str__(self) -> str:
        return self.to_text()


_X_TOKEN = re.compile(r"X\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def parse_pd(text: str, allow_link: bool = False) -> PDCode:
    """Parse whitespace-separated ``X[a,b,c,d]`` tokens.  A surrounding
    ``PD[...]`` wrapper and commas between tokens are tolerated."""
    s = text.strip()
    if s.startswith("PD[") and s.endswith("]"):
        s = s[3:-1]
    crossings = []
    pos = 0
    while pos < len(s):
        if s[pos].isspace() or s[pos] == ",":
            pos += 1
            continue
        m = _X_TOKEN.match(s, pos)
        if m is None:
            raise DiagramError(f"malformed PD text near {s[pos:pos + 20]!r}")
        labels = tuple(int(g) for g in m.groups())
        if min(labels) < 1:
            raise DiagramError("PD edge labels must be positive")
        crossings.append(labels)
        pos = m.end()
    return PDCode(tuple(crossings), allow_link=allow_link)


# ---------------------------------------------------------------------------
# Braid words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BraidWord:
    """Word in the braid group on ``strand_count`` strands; letter ``i``
    (resp. ``-i``) is the positive (resp. negative) crossing of strands
    ``i, i+1``."""

    strand_count: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        if self.strand_count < 1:
            raise DiagramError("a braid needs at least one strand")
        for x in self.letters:
            if x == 0 or abs(x) >= self.strand_count:
                raise DiagramError(f"letter {x} invalid on {self.strand_count} strands")

    @property
    def writhe(self) -> int:
        return sum(1 if x > 0 else -1 for x in self.letters)

    def permutation(self) -> list[int]:
        """perm[k] = final position of the strand starting at position k
        (0-based)."""
        pos = list(range(self.strand_count))  # pos[strand] = position
        at = list(range(self.strand_count))   # at[position] = strand
        for x in self.letters:
            i = abs(x) - 1
            a, b = at[i], at[i + 1]
            at[i], at[i + 1] = b, a
            pos[a], pos[b] = i + 1, i
        return pos

    def component_count(self) -> int:
        perm = self.permutation()
        seen = [False] * self.strand_count
        count = 0
        for k in range(self.strand_count):
            if not seen[k]:
                count += 1
                while not seen[k]:
                    seen[k] = True
                    k = perm[k]
        return count

    def is_knot(self) -> bool:
        return self.component_count() == 1

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        n = max(self.strand_count, other.strand_count)
        return BraidWord(n, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strand_count, tuple(-x for x in reversed(self.letters)))

    def to_text(self) -> str:
        return f"{self.strand_count}: " + " ".join(map(str, self.letters))

    def __str__(self) -> str:
        return self.to_text()


def parse_braid(text: str) -> BraidWord:
    """Parse ``"n: l1 l2 ..."`` (commas also accepted between letters)."""
    head, sep, tail = text.partition(":")
    if not sep:
        raise DiagramError(f"braid text needs 'strands: letters', got {text!r}")
    try:
        n = int(head.strip())
        letters = [int(tok) for tok in tail.replace(",", " ").split()]
    except ValueError as exc:
        raise DiagramError(f"malformed braid text {text!r}") from exc
    return BraidWord(n, tuple(letters))


def parse_knot(text: str, fmt: str | None = None) -> PDCode | BraidWord:
    """Parse either format; ``fmt`` is ``"pd"``, ``"braid"`` or None to sniff."""
    if fmt is None:
        fmt = "braid" if ":" in text and "X[" not in text else "pd"
    if fmt == "pd":
        return parse_pd(text)
    if fmt == "braid":
        return parse_braid(text)
    raise DiagramError(f"unknown format {fmt!r}")


def free_reduce(b: BraidWord, cyclic: bool = True) -> BraidWord:
    """Cancel adjacent ``x, -x`` pairs; with ``cyclic`` also across the ends
    (conjugation does not change the closure)."""
    out: list[int] = []
    for x in b.letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    if cyclic:
        lo, hi = 0, len(out)
        while hi - lo >= 2 and out[lo] == -out[hi - 1]:
            lo += 1
            hi -= 1
        out = out[lo:hi]
    return BraidWord(b.strand_count, tuple(out))


# ---------------------------------------------------------------------------
# Oriented diagrams drawn in a vertical strip
# ---------------------------------------------------------------------------

class StripBuilder:
    """Build a PD code by sweeping upward through a strip of oriented
    strands.  Positions are 1-based; ``up[k]`` says whether position k
    currently points up.  ``close()`` joins the top of the strip to the
    bottom position by position (a braid-style closure)."""

    def __init__(self, directions: Sequence[bool]):
        self._next = 0
        self.up = list(directions)
        self.edges = [self._new() for _ in directions]
        self.bottom = list(self.edges)
        self.bottom_up = list(directions)
        self.crossings: list[tuple] = []
        self.tags: list = []
        self._alias: dict = {}

    def _new(self):
        self._next += 1
        return ("e", self._next)

    def cross(self, j: int, lr_over: bool, tag=None) -> None:
        """Swap positions j and j+1.  The strand moving from position j to
        j+1 (bottom-left to top-right) is the over-strand iff ``lr_over``."""
        i = j - 1
        e_l, e_r = self.edges[i], self.edges[i + 1]
        up_l, up_r = self.up[i], self.up[i + 1]
        f_l, f_r = self._new(), self._new()
        slot = {"SE": e_r, "NE": f_r, "NW": f_l, "SW": e_l}
        if lr_over:  # under-strand is the right-to-left one
            start = "SE" if up_r else "NW"
        else:
            start = "SW" if up_l else "NE"
        order = ["SE", "NE", "NW", "SW"]
        k = order.index(start)
        self.crossings.append(tuple(slot[order[(k + m) % 4]] for m in range(4)))
        self.tags.append(tag)
        self.edges[i], self.edges[i + 1] = f_l, f_r
        self.up[i], self.up[i + 1] = up_r, up_l

    def cup(self, j: int, left_up: bool) -> None:
        """Insert a new arc opening upward at positions j, j+1."""
        e = self._new()
        self.edges[j - 1:j - 1] = [e, e]
        self.up[j - 1:j - 1] = [left_up, not left_up]

    def cap(self, j: int) -> None:
        """Join the strands at positions j, j+1 with an arc opening downward."""
        i = j - 1
        if self.up[i] == self.up[i + 1]:
            raise DiagramError("cap would join two strands with the same direction")
        a, b = self.edges[i], self.edges[i + 1]
        self._alias[self._find(a)] = self._find(b)
        del self.edges[i:i + 2]
        del self.up[i:i + 2]

    def _find(self, e):
        while e in self._alias:
            e = self._alias[e]
        return e

    def close(self, allow_link: bool = False) -> PDCode:
        if self.up != self.bottom_up:
            raise DiagramError("strip top and bottom directions differ")
        for top, bot in zip(self.edges, self.bottom):
            if self._find(top) != self._find(bot):
                self._alias[self._find(top)] = self._find(bot)
        xs = [tuple(self._find(e) for e in x) for x in self.crossings]
        if not xs:
            if len(self.bottom) != 1 and not allow_link:
                raise DiagramError("closure of a trivial braid on several strands is a link")
            return PDCode((), allow_link=allow_link)
        used = {e for x in xs for e in x}
        loose = {self._find(e) for e in self.bottom} - used
        if loose and not allow_link:
            raise DiagramError("closure has a component without crossings")
        return PDCode.from_raw(xs, allow_link=allow_link)


def braid_closure_to_pd(b: BraidWord, allow_link: bool = False) -> PDCode:
    """PD code of the closure; crossing k of the result is letter k."""
    if not allow_link and not b.is_knot():
        raise DiagramError(f"closure of {b} has {b.component_count()} components")
    sb = StripBuilder([True] * b.strand_count)
    for x in b.letters:
        sb.cross(abs(x), lr_over=x > 0)
    return sb.close(allow_link=allow_link)


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def mirror(d: PDCode) -> PDCode:
    """Swap over and under at every crossing; edge labels are untouched."""
    out = []
    for c, (a, b, cc, dd) in enumerate(d.crossings):
        if d.sign(c) > 0:   # over d -> b becomes the under-strand
            out.append((dd, a, b, cc))
        else:               # over b -> d
            out.append((b, cc, dd, a))
    return PDCode(tuple(out), allow_link=d.allow_link)


def _tail_head(d: PDCode, e: int):
    (c1, s1), (c2, s2) = d.edge_slots()[e]
    if d.is_incoming(c1, s1):
        return (c2, s2), (c1, s1)
    return (c1, s1), (c2, s2)


def connected_sum(a: PDCode, b: PDCode) -> PDCode:
    """Splice the lowest-numbered edge of ``a`` into that of ``b``."""
    if a.component_count != 1 or b.component_count != 1:
        raise DiagramError("connected sum is defined here for knots only")
    if not a.crossings:
        return b
    if not b.crossings:
        return a
    xs = [[("a", e) for e in x] for x in a.crossings] + [[("b", e) for e in x] for x in b.crossings]
    off = a.n
    (ta, tsa), (ha, hsa) = _tail_head(a, 1)
    (tb, tsb), (hb, hsb) = _tail_head(b, 1)
    xs[ta][tsa] = ("s", 1)
    xs[off + hb][hsb] = ("s", 1)
    xs[off + tb][tsb] = ("s", 2)
    xs[ha][hsa] = ("s", 2)
    return PDCode.from_raw(xs)


def braid_connected_sum(a: BraidWord, b: BraidWord) -> BraidWord:
    """a (x) shifted b, joined by one extra positive crossing."""
    n = a.strand_count
    shifted = tuple(x + n if x > 0 else x - n for x in b.letters)
    return BraidWord(n + b.strand_count, a.letters + shifted + (n,))


def split_braid_sum(b: BraidWord) -> list[BraidWord]:
    """Split a braid whose closure is visibly a connected sum.

    If the generator j occurs exactly once, every other letter lies on one
    side of it and commutes with the other side, so up to conjugation the
    word is L R s_j^+-1 and its closure is cl(L) # cl(R)."""
    n = b.strand_count
    count: dict[int, int] = {}
    for x in b.letters:
        count[abs(x)] = count.get(abs(x), 0) + 1
    for j in range(1, n):
        if count.get(j, 0) == 1:
            left = BraidWord(j, tuple(x for x in b.letters if abs(x) < j))
            right = BraidWord(n - j, tuple(x - j if x > 0 else x + j for x in b.letters if abs(x) > j))
            return split_braid_sum(left) + split_braid_sum(right)
    return [b]


def block_crossing(first: int, k: int, sign: int = 1) -> list[int]:
    """The left group of k strands starting at ``first`` crosses the right
    group of k strands; every crossing has sign ``sign``.  For sign +1 the
    left group passes over."""
    word = []
    for i in reversed(range(k)):
        word.extend(first + i + m for m in range(k))
    return word if sign > 0 else [-x for x in word]


def full_twist(first: int, k: int, power: int = 1) -> list[int]:
    """(s_first ... s_{first+k-2})^(k*power): ``power`` full twists on k
    parallel strands."""
    if k < 2 or power == 0:
        return []
    base = list(range(first, first + k - 1))
    if power < 0:
        base = [-x for x in reversed(base)]
    return base * (k * abs(power))


@dataclass(frozen=True)
class TwistRegion:
    """A generalized crossing change on 2k strands of a braid.

    The twisting disk meets strands ``first .. first+k-1`` in one direction
    and ``first+k .. first+2k-1`` in the other, so its boundary has linking
    number zero with the knot.  ``position`` is the index in the word where
    the twist goes (None = append).  ``sign = -1`` undoes a positive block
    crossing of the two groups, ``+1`` undoes a negative one.
    """

    first: int
    k: int
    sign: int
    position: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise DiagramError("twist half-width k must be positive")
        if self.sign not in (1, -1):
            raise DiagramError("twist sign must be +1 or -1")
        if self.first < 1:
            raise DiagramError("strand positions are 1-based")

    @classmethod
    def from_interval(cls, lo: int, hi: int, sign: int, position: int | None = None) -> "TwistRegion":
        width = hi - lo + 1
        if width <= 0 or width % 2:
            raise DiagramError(f"twist interval {lo}..{hi} must have even positive width")
        return cls(lo, width // 2, sign, position)

    @property
    def width(self) -> int:
        return 2 * self.k

    @property
    def strand_interval(self) -> tuple[int, int]:
        return self.first, self.first + 2 * self.k - 1


def twist_word(r: TwistRegion) -> list[int]:
    """Braid word of the linking-number-zero full twist.

    Passing the twisting circle around a block crossing B of the two groups
    turns B into B^-1 and adds one full twist to each group (the groups keep
    their framing because the circle has linking number zero with the knot).
    Inserted next to nothing, that is (D^2 (x) D^2) B^-2 for sign -1 and its
    inverse for sign +1.  For k = 1 this is s^-2 or s^2: a crossing change.
    """
    k, j = r.k, r.first
    # the group twists commute with B; putting them first lets B^-+2 cancel
    # against a following block crossing under free reduction
    b = block_crossing(j, k, 1)
    b_inv = [-x for x in reversed(b)]
    if r.sign < 0:
        return full_twist(j, k, 1) + full_twist(j + k, k, 1) + b_inv * 2
    return full_twist(j, k, -1) + full_twist(j + k, k, -1) + b * 2


def insert_full_twist(b: BraidWord, r: TwistRegion, reduce: bool = True) -> BraidWord:
    hi = r.first + 2 * r.k - 1
    if hi > b.strand_count:
        raise DiagramError(f"twist interval {r.strand_interval} exceeds {b.strand_count} strands")
    pos = len(b.letters) if r.position is None else r.position
    if not 0 <= pos <= len(b.letters):
        raise DiagramError(f"twist position {pos} outside the word")
    letters = b.letters[:pos] + tuple(twist_word(r)) + b.letters[pos:]
    out = BraidWord(b.strand_count, letters)
    return free_reduce(out) if reduce else out


def cable_letter(x: int, p: int) -> list[int]:
    """The p-parallel of a single braid letter."""
    i = abs(x)
    b = block_crossing((i - 1) * p + 1, p, 1)
    return b if x > 0 else [-y for y in reversed(b)]


def cable_braid(b: BraidWord, p: int, q: int, verify: bool = True) -> BraidWord:
    """Braid whose closure is the (p, q)-cable of the closure of ``b``.

    Every strand becomes p blackboard-parallel strands, which realises the
    (p, p*w) cable for writhe w; (s_1 ... s_{p-1})^(q - p*w) on the first
    group corrects this to the 0-framed (p, q)-cable.  With ``verify`` the
    Alexander polynomial is checked against Delta_K(t^p) Delta_T(p,q)(t).
    """
    if p < 1:
        raise DiagramError("cable parameter p must be positive")
    if not b.is_knot():
        raise DiagramError("cabling needs a knot")
    if p == 1:
        return b
    if gcd(p, q) != 1:
        raise DiagramError(f"(p, q) = ({p}, {q}) is not coprime; the cable is a link")
    letters: list[int] = []
    for x in b.letters:
        letters.extend(cable_letter(x, p))
    m = q - p * b.writhe
    corr = list(range(1, p))
    letters.extend(corr * m if m >= 0 else [-x for x in reversed(corr)] * (-m))
    out = BraidWord(b.strand_count * p, tuple(letters))
    if not out.is_knot():
        raise DiagramError("cable closure is not a knot")
    if verify:
        from .classical import alexander_of, torus_alexander

        lhs = alexander_of(out)
        rhs = alexander_of(b).substitute_power(p) * torus_alexander(p, q)
        if not lhs.equals_up_to_unit(rhs):
            raise ArithmeticError(
                f"cabling identity failed for ({p},{q}): {lhs} vs {rhs}")
    return out


def cable_twist_region(b: BraidWord, p: int, letter: int) -> TwistRegion:
    """The width-2p twist that changes crossing ``letter`` of ``b`` inside
    ``cable_braid(b, p, q)``: it sits just before that letter's block and
    turns the block into its inverse."""
    x = b.letters[letter]
    return TwistRegion((abs(x) - 1) * p + 1, p, -1 if x > 0 else 1, letter * p * p)
