"""Kauffman bracket and Jones polynomial.

Conventions: the A-smoothing of ``X[a,b,c,d]`` joins a-b and c-d, the
B-smoothing joins a-d and b-c.  The Jones polynomial is
V(t) = (-A^3)^(-w) <D> with A = t^(-1/4), so the right-handed trefoil has
V = t + t^3 - t^4.  It is returned as a LaurentPoly in t (printed as q
where that matches the usual notation).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .knotio import BraidWord, PDCode, braid_closure_to_pd
from .laurent import ONE, LaurentPoly, derivative, evaluate

__all__ = [
    "BudgetExceeded",
    "BracketState",
    "kauffman_bracket",
    "bracket_states",
    "jones",
    "miyazawa_left_side",
    "DELTA",
]

# loop value -A^2 - A^-2
DELTA = LaurentPoly.from_dict({2: -1, -2: -1})


class BudgetExceeded(RuntimeError):
    """A computation needed more resources than the caller allowed."""


@dataclass(frozen=True)
class BracketState:
    choices: tuple[bool, ...]  # True = A-smoothing
    loops: int

    @property
    def weight(self) -> LaurentPoly:
        a = sum(1 if c else -1 for c in self.choices)
        return DELTA ** (self.loops - 1) * LaurentPoly.monomial(a) if self.loops >= 1 else LaurentPoly.monomial(a)


def _smoothing_arcs(x, a_smoothing: bool):
    a, b, c, d = x
    return ((a, b), (c, d)) if a_smoothing else ((a, d), (b, c))


def bracket_states(d: PDCode) -> Iterator[BracketState]:
    """All 2^n states with their loop counts (exponential; for checking)."""
    n = d.n
    labels = sorted({e for x in d.crossings for e in x})
    for mask in range(1 << n):
        parent = {e: e for e in labels}

        def find(e):
            while parent[e] != e:
                parent[e] = parent[parent[e]]
                e = parent[e]
            return e

        choices = tuple(not (mask >> i) & 1 for i in range(n))
        for x, ch in zip(d.crossings, choices):
            for u, v in _smoothing_arcs(x, ch):
                parent[find(u)] = find(v)
        yield BracketState(choices, len({find(e) for e in labels}))


def _contraction_order(crossings) -> list[int]:
    """Greedy order keeping the open boundary small."""
    remaining = set(range(len(crossings)))
    open_edges: set = set()
    order = []
    while remaining:
        best = min(
            remaining,
            key=lambda c: (sum(-1 if e in open_edges else 1 for e in crossings[c]), c),
        )
        order.append(best)
        remaining.remove(best)
        for e in crossings[best]:
            if e in open_edges:
                open_edges.remove(e)
            else:
                open_edges.add(e)
    return order


def _add_arc(m: dict, x, y) -> int:
    """Join endpoints x, y into the partial matching ``m``; return the
    number of loops closed."""
    if x == y:
        return 1
    if m.get(x) == y:
        del m[x], m[y]
        return 1
    ex = m.pop(x) if x in m else x
    if ex != x:
        del m[ex]
    ey = m.pop(y) if y in m else y
    if ey != y:
        del m[ey]
    m[ex] = ey
    m[ey] = ex
    return 0


def kauffman_bracket(d: PDCode, budget: int | None = None, max_states: int = 2_000_000) -> LaurentPoly:
    """<D> normalized so that the crossingless unknot has bracket 1.

    Computed by contracting crossings one at a time, memoizing the partial
    sum by the way the open boundary edges are paired.  ``budget`` caps the
    crossing count; ``max_states`` caps the number of boundary pairings
    held at once."""
    if budget is not None and d.n > budget:
        raise BudgetExceeded(f"{d.n} crossings exceeds the bracket budget of {budget}")
    if not d.crossings:
        return ONE
    # boundary pairing -> {loops closed so far: polynomial}
    acc: dict[tuple, dict[int, LaurentPoly]] = {(): {0: ONE}}
    for ci in _contraction_order(d.crossings):
        x = d.crossings[ci]
        new: dict[tuple, dict[int, LaurentPoly]] = {}
        for key, by_loops in acc.items():
            for a_smooth, shift in ((True, 1), (False, -1)):
                m = {}
                for u, v in key:
                    m[u] = v
                    m[v] = u
                loops = 0
                for u, v in _smoothing_arcs(x, a_smooth):
                    loops += _add_arc(m, u, v)
                nkey = tuple(sorted((u, v) for u, v in m.items() if u < v))
                slot = new.setdefault(nkey, {})
                for lp, poly in by_loops.items():
                    k = lp + loops
                    term = poly.shift(shift)
                    slot[k] = slot[k] + term if k in slot else term
        # fold loop counts into the polynomial when several accumulate
        acc = {}
        for key, by_loops in new.items():
            base = min(by_loops)
            total = None
            for lp, poly in by_loops.items():
                term = poly * DELTA ** (lp - base) if lp > base else poly
                total = term if total is None else total + term
            acc[key] = {base: total}
        if len(acc) > max_states:
            raise BudgetExceeded(f"bracket contraction exceeded {max_states} boundary states")
    (key, by_loops), = acc.items()
    if key:
        raise ArithmeticError("open boundary left after contracting every crossing")
    (loops, poly), = by_loops.items()
    return poly * DELTA ** (loops - 1) if loops >= 1 else poly


def _bracket_to_jones(bracket: LaurentPoly, writhe: int) -> LaurentPoly:
    f = bracket * LaurentPoly.monomial(-3 * writhe, -1 if writhe % 2 else 1)
    out = {}
    for e, c in f.to_dict().items():
        if e % 4:
            raise ArithmeticError("bracket exponents are not those of a knot")
        out[-e // 4] = c
    return LaurentPoly.from_dict(out)


def jones(knot, budget: int | None = None, max_states: int = 2_000_000) -> LaurentPoly:
    """Jones polynomial V(t) of a knot given as PD code or braid word."""
    d = braid_closure_to_pd(knot) if isinstance(knot, BraidWord) else knot
    return _bracket_to_jones(kauffman_bracket(d, budget, max_states), d.writhe)


def miyazawa_left_side(v: LaurentPoly) -> int:
    """V'(-1), exactly."""
    val = evaluate(derivative(v), -1)
    if val.denominator != 1:
        raise ArithmeticError("derivative at -1 is not an integer")
    return int(val)
