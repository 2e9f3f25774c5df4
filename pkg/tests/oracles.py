"""Independent reference computations used only by the tests.

None of these share code with the engine beyond the diagram containers.
"""
from __future__ import annotations

import numpy as np
import sympy

from untwist.knotio import PDCode
from untwist.laurent import LaurentPoly

t = sympy.Symbol("t")


def _arcs(d: PDCode) -> dict[int, int]:
    """Edge label -> Wirtinger arc index (over-strands do not break arcs)."""
    parent = {e: e for x in d.crossings for e in x}

    def find(e):
        while parent[e] != e:
            e = parent[e]
        return e

    for a, b, c, dd in d.crossings:
        parent[find(b)] = find(dd)
    roots = sorted({find(e) for e in parent})
    index = {r: i for i, r in enumerate(roots)}
    return {e: index[find(e)] for e in parent}


def fox_alexander(d: PDCode) -> LaurentPoly:
    """Delta from the abelianized Fox matrix of the Wirtinger presentation,
    as a first minor (sympy determinant), Conway-normalized by symmetry."""
    if d.n == 0:
        return LaurentPoly.const(1)
    arc = _arcs(d)
    n = d.n
    m = sympy.zeros(n, n)
    for r, (a, b, c, dd) in enumerate(d.crossings):
        eps = d.sign(r)
        k, i, j = arc[b], arc[a], arc[c]
        m[r, k] += 1 - t**eps
        m[r, i] += t**eps
        m[r, j] += -1
    minor = m[1:, 1:].det(method="berkowitz")
    return _normalize(minor)


def _normalize(expr) -> LaurentPoly:
    num, den = sympy.fraction(sympy.together(sympy.expand(expr)))
    poly = sympy.Poly(sympy.expand(num), t)
    dpoly = sympy.Poly(den, t)
    if dpoly.degree() > 0 and dpoly.length() != 1:
        raise ArithmeticError("minor is not a Laurent polynomial")
    coeffs = poly.all_coeffs()[::-1]
    lo = next(i for i, c in enumerate(coeffs) if c != 0)
    coeffs = [int(c) for c in coeffs[lo:]]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    span = len(coeffs) - 1
    p = LaurentPoly(-(span // 2), tuple(coeffs))
    return p if sum(coeffs) > 0 else -p


def brute_bracket(d: PDCode) -> LaurentPoly:
    """Kauffman bracket by plain 2^n state enumeration."""
    if d.n == 0:
        return LaurentPoly.const(1)
    delta = LaurentPoly.from_dict({2: -1, -2: -1})
    total = LaurentPoly()
    for mask in range(1 << d.n):
        parent: dict = {}

        def find(e):
            parent.setdefault(e, e)
            while parent[e] != e:
                e = parent[e]
            return e

        a_count = 0
        for i, (a, b, c, dd) in enumerate(d.crossings):
            if mask >> i & 1:
                pairs = ((a, dd), (b, c))
            else:
                pairs = ((a, b), (c, dd))
                a_count += 1
            for u, v in pairs:
                parent[find(u)] = find(v)
        loops = len({find(e) for x in d.crossings for e in x})
        total = total + LaurentPoly.monomial(2 * a_count - d.n) * delta ** (loops - 1)
    return total


def float_signature(v) -> int:
    if not v:
        return 0
    a = np.array(v, dtype=float)
    ev = np.linalg.eigvalsh(a + a.T)
    return int((ev > 1e-9).sum() - (ev < -1e-9).sum())
