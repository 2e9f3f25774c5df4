"""Turn an arbitrary knot diagram into a closed braid.

Vogel's algorithm: while some face of the diagram has two edges from
different Seifert circles running the same way around it, push one edge
over the other across that face (a Reidemeister II move).  Once no such
face is left the Seifert circles are nested coherently and the braid word
can be read off level by level.  Crossing identities are tracked, so the
caller learns which braid letter came from which original crossing.
"""
from __future__ import annotations

from dataclasses import dataclass

from .knotio import BraidWord, DiagramError, PDCode, _orient

__all__ = ["BraidedDiagram", "pd_to_braid"]


@dataclass(frozen=True)
class BraidedDiagram:
    braid: BraidWord
    # letter index -> index of the original PD crossing (None for crossings
    # introduced by the moves)
    origin: tuple[int | None, ...]
    moves: int

    def letter_of(self, crossing: int) -> int:
        return self.origin.index(crossing)


class _Diagram:
    def __init__(self, crossings, ids):
        self.xs = [list(x) for x in crossings]
        self.ids = list(ids)
        self._fresh = 0
        self.refresh()

    def fresh(self):
        self._fresh += 1
        return ("v", self._fresh)

    def refresh(self):
        incoming, _ = _orient(self.xs)
        self.inc = incoming
        self.where = {}
        for ci, x in enumerate(self.xs):
            for s, e in enumerate(x):
                self.where.setdefault(e, []).append((ci, s))

    def partner(self, ci, s):
        a, b = self.where[self.xs[ci][s]]
        return b if a == (ci, s) else a

    def seifert_out(self, ci, s):
        """Outgoing slot joined to incoming slot s by the oriented smoothing."""
        for o in ((s + 1) % 4, (s - 1) % 4):
            if not self.inc[ci][o]:
                return o
        raise DiagramError("bad orientation at crossing")

    def seifert_circles(self):
        circle = {}
        circles = []
        for ci in range(len(self.xs)):
            for s in range(4):
                if self.inc[ci][s] or self.xs[ci][s] in circle:
                    continue
                cid = len(circles)
                edges = []
                c, o = ci, s
                while self.xs[c][o] not in circle:
                    e = self.xs[c][o]
                    circle[e] = cid
                    edges.append((c, o))
                    c2, s2 = self.partner(c, o)
                    c, o = c2, self.seifert_out(c2, s2)
                circles.append(edges)
        return circle, circles

    def faces(self):
        """Faces as lists of darts (crossing, slot), each dart leaving its
        crossing through that slot; the face lies to the right."""
        seen = set()
        faces = []
        for ci in range(len(self.xs)):
            for s in range(4):
                if (ci, s) in seen:
                    continue
                face = []
                d = (ci, s)
                while d not in seen:
                    seen.add(d)
                    face.append(d)
                    c2, s2 = self.partner(*d)
                    d = (c2, (s2 + 1) % 4)
                faces.append(face)
        return faces

    def find_defect(self, circle):
        for face in self.faces():
            seen = {}
            for d in face:
                e = self.xs[d[0]][d[1]]
                key = not self.inc[d[0]][d[1]]  # dart agrees with orientation
                cid = circle[e]
                for other_c, other_d in seen.get(key, []):
                    if other_c != cid:
                        return other_d, d
                seen.setdefault(key, []).append((cid, d))
        return None

    def push_over(self, d1, d2):
        """Reidemeister II: finger of d1's edge pushed over d2's edge across
        the face on their right."""
        (c1, s1), (c2, s2) = d1, d2
        q1 = self.partner(c1, s1)
        q2 = self.partner(c2, s2)
        e1a, e1b, e1c = self.fresh(), self.fresh(), self.fresh()
        e2a, e2b, e2c = self.fresh(), self.fresh(), self.fresh()
        agrees2 = not self.inc[c2][s2]
        self.xs[c1][s1] = e1a
        self.xs[q1[0]][q1[1]] = e1c
        self.xs[c2][s2] = e2a
        self.xs[q2[0]][q2[1]] = e2c
        if agrees2:
            x = [e2b, e1a, e2c, e1b]
            y = [e2a, e1c, e2b, e1b]
        else:
            x = [e2c, e1b, e2b, e1a]
            y = [e2b, e1b, e2a, e1c]
        self.xs.extend([x, y])
        self.ids.extend([None, None])
        self.refresh()

    # -- reading the braid ---------------------------------------------
    def read_braid(self, signs_of):
        circle, circles = self.seifert_circles()
        ncirc = len(circles)
        faces = self.faces()
        face_of = {}
        for fi, face in enumerate(faces):
            for d in face:
                face_of[d] = fi
        parent = list(range(len(faces)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        # at each crossing the two quadrants not cut off by the smoothing
        # are the same Seifert region
        for ci in range(len(self.xs)):
            arcs = set()
            for s in range(4):
                if self.inc[ci][s]:
                    o = self.seifert_out(ci, s)
                    arcs.add(frozenset((s, o)))
            quads = [a for a in range(4) if frozenset((a, (a + 1) % 4)) not in arcs]
            f0, f1 = (face_of[(ci, (a + 1) % 4)] for a in quads)
            parent[find(f0)] = find(f1)

        sides = []
        for edges in circles:
            c, o = edges[0]
            right = find(face_of[(c, o)])
            c2, s2 = self.partner(c, o)
            # the dart leaving the far end runs backwards; its right is our left
            left = find(face_of[(c2, s2)])
            sides.append((left, right))
        # regions and circles form a tree; it must be a path
        adj: dict[int, list[int]] = {}
        for cid, (l, r) in enumerate(sides):
            adj.setdefault(l, []).append(cid)
            adj.setdefault(r, []).append(cid)
        if any(len(v) > 2 for v in adj.values()):
            raise DiagramError("Seifert circles are not nested in a chain")
        if ncirc == 1:
            order = [0]
        else:
            start = min(r for r, v in adj.items() if len(v) == 1)
            order = []
            region, prev = start, None
            while True:
                nxt = [c for c in adj[region] if c != prev]
                if not nxt:
                    break
                cid = nxt[0]
                order.append(cid)
                l, r = sides[cid]
                region = r if l == region else l
                prev = cid
        level_of = {cid: i for i, cid in enumerate(order)}
        # coherence: inner region on the same side of every circle
        inner_left = None
        region = start if ncirc > 1 else None
        if ncirc > 1:
            for cid in order:
                l, r = sides[cid]
                il = l == region
                if inner_left is None:
                    inner_left = il
                elif il != inner_left:
                    raise DiagramError("Seifert circles are not coherently oriented")
                region = r if il else l

        # crossings touched by each circle, in orientation order
        touched = []
        for edges in circles:
            seq = []
            for c, o in edges:
                seq.append(c)  # circle leaves crossing c along this edge
            touched.append(seq)
        level = {}
        for ci in range(len(self.xs)):
            cs = set()
            for s in range(4):
                cs.add(level_of[circle[self.xs[ci][s]]])
            if len(cs) != 2 or max(cs) - min(cs) != 1:
                raise DiagramError("crossing does not join adjacent Seifert circles")
            level[ci] = min(cs)
        # cut each circle: the innermost anywhere, each next one just
        # before the first crossing it shares with the previous circle
        lin = []
        first_shared = None
        for i, cid in enumerate(order):
            seq = touched[cid]
            if i == 0:
                k = 0
            else:
                k = seq.index(first_shared)
            seq = seq[k:] + seq[:k]
            lin.append(seq)
            shared = [c for c in seq if level[c] == i]
            first_shared = shared[0] if shared else None
        # topological sort of the union of the linear orders
        succ = {c: set() for c in range(len(self.xs))}
        indeg = {c: 0 for c in range(len(self.xs))}
        for seq in lin:
            for a, b in zip(seq, seq[1:]):
                if b not in succ[a]:
                    succ[a].add(b)
                    indeg[b] += 1
        ready = sorted(c for c in indeg if indeg[c] == 0)
        out = []
        while ready:
            c = ready.pop(0)
            out.append(c)
            for b in sorted(succ[c]):
                indeg[b] -= 1
                if indeg[b] == 0:
                    ready.append(b)
        if len(out) != len(self.xs):
            raise DiagramError("crossing order around the braid axis is cyclic")
        letters = tuple(signs_of[c] * (level[c] + 1) for c in out)
        return BraidWord(max(ncirc, 1), letters), tuple(self.ids[c] for c in out)


def pd_to_braid(d: PDCode, max_moves: int | None = None) -> BraidedDiagram:
    """Closed-braid form of a knot diagram, via Vogel moves."""
    if not d.crossings:
        return BraidedDiagram(BraidWord(1, ()), (), 0)
    diag = _Diagram(d.crossings, range(d.n))
    limit = max_moves if max_moves is not None else 4 * d.n + 16
    moves = 0
    while True:
        circle, _ = diag.seifert_circles()
        defect = diag.find_defect(circle)
        if defect is None:
            break
        if moves >= limit:
            raise DiagramError("Vogel moves did not terminate within the limit")
        diag.push_over(*defect)
        moves += 1
    signs = [1 if diag.inc[c][3] else -1 for c in range(len(diag.xs))]
    braid, origin = diag.read_braid(signs)
    return BraidedDiagram(braid, origin, moves)
