"""Seifert matrices and the invariants read off them: Alexander and Conway
polynomials, determinant, signature, Tristram-Levine signatures, and the
symplectic normal form of a Seifert matrix.

Matrices are plain lists of lists of ints.  Seifert matrices follow
V[i][j] = lk(a_i^+, a_j); with this choice the right-handed trefoil has
signature -2.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .knotio import BraidWord, DiagramError, PDCode, split_braid_sum
from .laurent import ONE, T, LambdaMatrix, LaurentPoly, det as lambda_det

IntMatrix = list[list[int]]

__all__ = [
    "ClassicalInvariants",
    "collins_seifert",
    "seifert_matrix",
    "reduce_seifert",
    "reduce_zero_rows",
    "alexander",
    "alexander_of",
    "signature_of",
    "conway",
    "conway_coefficient",
    "knot_determinant",
    "signature",
    "tristram_levine",
    "symplectic_normalize",
    "SymplecticNormalization",
    "torus_alexander",
    "classical_invariants",
    "as_braid",
]


# ---------------------------------------------------------------------------
# Seifert matrices
# ---------------------------------------------------------------------------

def collins_seifert(b: BraidWord) -> IntMatrix:
    """Seifert matrix of a braid closure from the canonical Seifert surface
    (one disk per strand, one band per letter).  Generators are loops
    through consecutive bands at the same level."""
    by_level: dict[int, list[tuple[int, bool]]] = {}
    for pos, x in enumerate(b.letters):
        by_level.setdefault(abs(x), []).append((pos, x > 0))
    if b.strand_count > 1 and sorted(by_level) != list(range(1, b.strand_count)):
        raise DiagramError("braid closure is split; no connected Seifert surface")
    gens = []
    for lev in sorted(by_level):
        g = by_level[lev]
        for i in range(len(g) - 1):
            gens.append((lev, i, g[i][0], g[i + 1][0], g[i][1], g[i + 1][1]))
    n = len(gens)
    m = [[0] * n for _ in range(n)]
    index = {(g[0], g[1]): k for k, g in enumerate(gens)}
    for x, (lev, i, s0, s1, pos0, pos1) in enumerate(gens):
        if pos0 and pos1:
            m[x][x] = -1
        elif not pos0 and not pos1:
            m[x][x] = 1
        y = index.get((lev, i + 1))
        if y is not None:
            if pos1:
                m[y][x] = 1
            else:
                m[x][y] = -1
        for y, (lev2, _, t0, t1, _, _) in enumerate(gens):
            if lev2 != lev + 1:
                continue
            if s0 < t0 < s1 < t1:
                m[y][x] = -1
            elif t0 < s0 < t1 < s1:
                m[y][x] = 1
    return m


def as_braid(knot) -> BraidWord:
    if isinstance(knot, BraidWord):
        return knot
    if isinstance(knot, PDCode):
        from .braiding import pd_to_braid

        return pd_to_braid(knot).braid
    raise TypeError(f"expected PDCode or BraidWord, got {type(knot).__name__}")


def seifert_matrix(knot, reduce: bool = True) -> IntMatrix:
    """Seifert matrix of a knot given as a PD code or braid word.  PD codes
    are first isotoped into closed-braid form.  With ``reduce`` the matrix is
    shrunk by S-equivalence until its size is the degree span of Delta."""
    b = as_braid(knot)
    if not b.is_knot():
        raise DiagramError("Seifert matrix requested for a link")
    v = collins_seifert(b)
    return reduce_seifert(v) if reduce else v


def _transpose(m: IntMatrix) -> IntMatrix:
    return [list(r) for r in zip(*m)] if m else []


def _kernel_vector(m: IntMatrix) -> list[int] | None:
    """Primitive integer vector x != 0 with m x = 0, or None."""
    n = len(m[0]) if m else 0
    rows = []
    for r in m:
        d = {j: Fraction(v) for j, v in enumerate(r) if v}
        if d:
            rows.append(d)
    pivots: dict[int, dict[int, Fraction]] = {}
    for r in rows:
        for pc, pr in pivots.items():
            c = r.get(pc)
            if c:
                for j, v in pr.items():
                    nv = r.get(j, 0) - c * v
                    if nv:
                        r[j] = nv
                    else:
                        r.pop(j, None)
        if not r:
            continue
        pc = min(r, key=lambda j: (abs(r[j].denominator), j))
        inv = 1 / r[pc]
        r = {j: v * inv for j, v in r.items()}
        for other in pivots.values():
            c = other.get(pc)
            if c:
                for j, v in r.items():
                    nv = other.get(j, 0) - c * v
                    if nv:
                        other[j] = nv
                    else:
                        other.pop(j, None)
        pivots[pc] = r
    frees = [j for j in range(n) if j not in pivots]
    if not frees:
        return None
    best = None
    for free in frees:
        x = {free: Fraction(1)}
        for pc, r in pivots.items():
            c = r.get(free)
            if c:
                x[pc] = -c
        den = 1
        for v in x.values():
            den = den * v.denominator // gcd(den, v.denominator)
        ints = {j: int(v * den) for j, v in x.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        ints = {j: v // g for j, v in ints.items()}
        # small, sparse vectors keep the later Euclid steps from growing entries
        cost = (max(abs(v) for v in ints.values()), len(ints))
        if best is None or cost < best[0]:
            best = (cost, ints)
            if cost == (1, 1):
                break
    out = [0] * n
    for j, v in best[1].items():
        out[j] = v
    return out


def _basis_add(v: IntMatrix, j: int, i: int, a: int) -> None:
    """Congruence by b_j <- b_j + a b_i."""
    if not a:
        return
    for r in v:
        r[j] += a * r[i]
    rj, ri = v[j], v[i]
    for c in range(len(v)):
        rj[c] += a * ri[c]


def _euclid_to_unit(vec: list[int], op, skip: int | None = None) -> int:
    """Run integer Euclid on ``vec`` using op(target, pivot, q), which must
    perform vec[target] -= q * vec[pivot]; returns the surviving index."""
    while True:
        nz = [i for i, x in enumerate(vec) if x and i != skip]
        if len(nz) <= 1:
            break
        p = min(nz, key=lambda i: abs(vec[i]))
        for i in nz:
            if i != p:
                op(i, p, vec[i] // vec[p])
    if not nz:
        raise ArithmeticError("zero vector in Euclid reduction")
    return nz[0]


def _split_left_kernel(v: IntMatrix, u: list[int]) -> IntMatrix:
    """Given primitive u with u^T v = 0, remove an elementary enlargement."""
    v = [r[:] for r in v]
    u = u[:]

    # b_j += q b_i sends coordinate u_i to u_i - q u_j
    def op_u(i, p, q):
        _basis_add(v, p, i, q)
        u[i] -= q * u[p]

    j = _euclid_to_unit(u, op_u)
    if abs(u[j]) != 1 or any(v[j]):
        raise ArithmeticError("left kernel vector is not primitive")
    col = [r[j] for r in v]

    # b_i += q b_p adds q * col[p] to col[i]; use q = -quot
    def op_c(i, p, q):
        _basis_add(v, i, p, -q)
        col[i] -= q * col[p]

    y = _euclid_to_unit(col, op_c, skip=j)
    if abs(col[y]) != 1:
        raise ArithmeticError("V - V^T is not unimodular")
    keep = [k for k in range(len(v)) if k not in (j, y)]
    return [[v[a][b] for b in keep] for a in keep]


class _Sparse:
    """Square integer matrix as row and column dictionaries, for the
    congruence moves of the zero-row reduction."""

    def __init__(self, v: IntMatrix):
        n = len(v)
        self.rows = {i: {j: x for j, x in enumerate(v[i]) if x} for i in range(n)}
        self.cols = {j: {} for j in range(n)}
        for i, r in self.rows.items():
            for j, x in r.items():
                self.cols[j][i] = x

    def transpose(self) -> None:
        self.rows, self.cols = self.cols, self.rows

    def set(self, i, j, x) -> None:
        if x:
            self.rows[i][j] = x
            self.cols[j][i] = x
        else:
            self.rows[i].pop(j, None)
            self.cols[j].pop(i, None)

    def basis_add(self, j, i, a) -> None:
        """b_j <- b_j + a b_i."""
        for r, x in list(self.cols[i].items()):
            self.set(r, j, self.rows[r].get(j, 0) + a * x)
        for c, x in list(self.rows[i].items()):
            self.set(j, c, self.rows[j].get(c, 0) + a * x)

    def drop(self, k) -> None:
        for c in list(self.rows[k]):
            self.cols[c].pop(k, None)
        for r in list(self.cols[k]):
            self.rows[r].pop(k, None)
        del self.rows[k], self.cols[k]

    def split_zero_row(self, j) -> None:
        col = self.cols[j]
        while True:
            nz = [i for i, x in col.items() if i != j]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda i: (abs(col[i]), i))
            for i in nz:
                if i != p:
                    self.basis_add(i, p, -(col[i] // col[p]))
        if len(nz) != 1 or abs(col[nz[0]]) != 1:
            raise ArithmeticError("V - V^T is not unimodular")
        y = nz[0]
        self.drop(j)
        self.drop(y)

    def dense(self) -> IntMatrix:
        keys = sorted(self.rows)
        pos = {k: a for a, k in enumerate(keys)}
        out = [[0] * len(keys) for _ in keys]
        for i in keys:
            for j, x in self.rows[i].items():
                out[pos[i]][pos[j]] = x
        return out


def reduce_zero_rows(v: IntMatrix) -> IntMatrix:
    """S-equivalence reduction restricted to zero rows and columns.  These
    moves never enlarge entries, so this is a cheap first pass."""
    sp = _Sparse(v)
    while True:
        j = next((i for i, r in sp.rows.items() if not r), None)
        if j is not None:
            sp.split_zero_row(j)
            continue
        j = next((i for i, c in sp.cols.items() if not c), None)
        if j is None:
            break
        sp.transpose()
        sp.split_zero_row(j)
        sp.transpose()
    return sp.dense()


def reduce_seifert(v: IntMatrix) -> IntMatrix:
    """Shrink a Seifert matrix of a knot by S-equivalence while it is
    singular.  The result is nonsingular, so its size is the degree span of
    the Alexander polynomial; Delta, signatures and the Blanchfield form
    are unchanged."""
    v = reduce_zero_rows(v)
    while v:
        u = _kernel_vector(_transpose(v))
        if u is not None:
            v = _split_left_kernel(v, u)
            continue
        u = _kernel_vector(v)
        if u is not None:
            v = _transpose(_split_left_kernel(_transpose(v), u))
            continue
        break
    return v


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

def _skew_det(v: IntMatrix) -> int:
    if not v:
        return 1
    m = [[Fraction(v[i][j] - v[j][i]) for j in range(len(v))] for i in range(len(v))]
    return int(_rational_det(m))


def _rational_det(m) -> Fraction:
    m = [r[:] for r in m]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] / m[c][c]
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return d


def alexander(v: IntMatrix) -> LaurentPoly:
    """Conway-normalized Alexander polynomial t^(-n/2) det(t V - V^T), so
    that Delta(t^-1) = Delta(t) and Delta(1) = 1."""
    n = len(v)
    if n == 0:
        return ONE
    if n % 2:
        raise ValueError("Seifert matrix of a knot has even size")
    rows = [[T * v[i][j] - LaurentPoly.const(v[j][i]) for j in range(n)] for i in range(n)]
    d = lambda_det(LambdaMatrix(rows)).as_laurent().shift(-(n // 2))
    at1 = d.coeffs and sum(d.coeffs)
    if at1 not in (1, -1):
        raise ArithmeticError(f"Delta(1) = {at1}; not the Seifert matrix of a knot")
    return d if at1 == 1 else -d


def torus_alexander(p: int, q: int) -> LaurentPoly:
    """(t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1)), symmetrized."""
    p, q = abs(p), abs(q)
    if p == 0 or q == 0 or gcd(p, q) != 1:
        raise ValueError("torus knot needs coprime nonzero p, q")
    if p == 1 or q == 1:
        return ONE
    num = (LaurentPoly.monomial(p * q) - ONE) * (T - ONE)
    den = (LaurentPoly.monomial(p) - ONE) * (LaurentPoly.monomial(q) - ONE)
    d = num.divmod_exact(den)
    return d.shift(-((p - 1) * (q - 1) // 2))


def conway(delta: LaurentPoly) -> LaurentPoly:
    """Conway polynomial (as a polynomial in z) of a symmetric Alexander
    polynomial with Delta(1) = 1, via t + t^-1 = z^2 + 2."""
    if not delta.is_symmetric():
        raise ValueError("Conway polynomial needs the symmetric normalization")
    s = LaurentPoly.from_dict({0: 2, 2: 1})  # t + 1/t in terms of z
    two = LaurentPoly.const(2)
    cheb = [two, s]  # t^k + t^-k as polynomials in z
    top = delta.max_exp if not delta.is_zero() else 0
    while len(cheb) <= top:
        cheb.append(s * cheb[-1] - cheb[-2])
    out = LaurentPoly.const(delta.coeff(0))
    for k in range(1, top + 1):
        out = out + cheb[k] * delta.coeff(k)
    return out


def conway_coefficient(delta: LaurentPoly, k: int) -> int:
    return conway(delta).coeff(k)


# ---------------------------------------------------------------------------
# Signatures
# ---------------------------------------------------------------------------

def _symmetric_inertia(m) -> tuple[int, int, int]:
    """(positive, negative, zero) counts for a symmetric rational matrix."""
    a = [[Fraction(x) for x in r] for r in m]
    n = len(a)
    idx = list(range(n))
    pos = neg = zero = 0
    while idx:
        piv = next((i for i in idx if a[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in idx for j in idx if i < j and a[i][j]), None)
            if pair is None:
                zero += len(idx)
                break
            i, j = pair
            # e_i <- e_i + e_j: new diagonal 2 a_ij (a_jj = a_ii = 0)
            for r in idx:
                a[i][r] += a[j][r]
            for r in idx:
                a[r][i] += a[r][j]
            piv = i
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in idx if i != piv]
        for i in rest:
            if a[i][piv]:
                f = a[i][piv] / d
                for j in rest:
                    if a[piv][j]:
                        a[i][j] -= f * a[piv][j]
        idx = rest
    return pos, neg, zero


def signature(v: IntMatrix) -> int:
    """Signature of V + V^T, computed exactly."""
    n = len(v)
    pos, neg, _ = _symmetric_inertia([[v[i][j] + v[j][i] for j in range(n)] for i in range(n)])
    return pos - neg


def knot_determinant(v: IntMatrix) -> int:
    """|Delta(-1)| = |det(V + V^T)|."""
    n = len(v)
    if n == 0:
        return 1
    return abs(int(_rational_det([[Fraction(v[i][j] + v[j][i]) for j in range(n)] for i in range(n)])))


def tristram_levine(v: IntMatrix, k: int, n: int) -> int:
    """Signature of (1 - w) V + (1 - conj w) V^T at w = exp(2 pi i k/n),
    computed exactly in Q(w).  Raises if the form is degenerate there
    (equivalently Delta(w) = 0)."""
    from .cyclotomic import CyclotomicField, hermitian_signature

    size = len(v)
    if size == 0:
        return 0
    f = CyclotomicField(k, n)
    if f.n == 1:
        return 0
    one = f.const(1)
    a = f.elt(one - f.omega)
    ab = f.conj(a)
    h = [[f.elt(a * v[i][j] + ab * v[j][i]) for j in range(size)] for i in range(size)]
    sig, nullity = hermitian_signature(f, h)
    if nullity:
        raise ValueError(f"Delta vanishes at exp(2 pi i {k}/{n}); signature is not defined there")
    return sig


# ---------------------------------------------------------------------------
# Symplectic normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymplecticNormalization:
    """``normalized = P V P^T`` with ``normalized - normalized^T`` equal to
    [[0, -I], [I, 0]]."""

    P: tuple[tuple[int, ...], ...]
    normalized: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.P) // 2

    def check(self, v: IntMatrix) -> bool:
        n = len(v)
        p = self.P
        pv = [[sum(p[i][a] * v[a][b] for a in range(n)) for b in range(n)] for i in range(n)]
        pvpt = [[sum(pv[i][b] * p[j][b] for b in range(n)) for j in range(n)] for i in range(n)]
        if pvpt != [list(r) for r in self.normalized]:
            return False
        if abs(int(_rational_det([[Fraction(x) for x in r] for r in p]))) != 1:
            return False
        g = n // 2
        want = [[0] * n for _ in range(n)]
        for i in range(g):
            want[i][g + i] = -1
            want[g + i][i] = 1
        return [[pvpt[i][j] - pvpt[j][i] for j in range(n)] for i in range(n)] == want


def symplectic_normalize(v: IntMatrix) -> SymplecticNormalization:
    """Unimodular P with P (V - V^T) P^T = [[0, -I], [I, 0]], found by the
    integer symplectic-basis algorithm."""
    n = len(v)
    if n % 2:
        raise ValueError("odd-size Seifert matrix")
    vm = [list(r) for r in v]
    pm = [[int(i == j) for j in range(n)] for i in range(n)]

    def add(j, i, a):  # b_j <- b_j + a b_i
        if a:
            _basis_add(vm, j, i, a)
            for r in pm:
                r[j] += a * r[i]

    def swap(i, j):
        for r in vm:
            r[i], r[j] = r[j], r[i]
        vm[i], vm[j] = vm[j], vm[i]
        for r in pm:
            r[i], r[j] = r[j], r[i]

    def neg(i):
        for r in vm:
            r[i] = -r[i]
        vm[i] = [-x for x in vm[i]]
        for r in pm:
            r[i] = -r[i]

    def s(i, j):
        return vm[i][j] - vm[j][i]

    for base in range(0, n, 2):
        e = base
        row = [s(e, j) if j > e else 0 for j in range(n)]

        def op(i, p, q):
            add(i, p, -q)
            row[i] -= q * row[p]

        f = _euclid_to_unit(row, op)
        if abs(row[f]) != 1:
            raise ArithmeticError("V - V^T is not unimodular")
        if f != base + 1:
            swap(f, base + 1)
        f = base + 1
        if s(e, f) < 0:
            neg(f)
        # clear the remaining pairings with e and f
        for k in range(base + 2, n):
            add(k, e, s(f, k))     # S(f, k) -> S(f, k) + a S(f, e) = 0
            add(k, f, -s(e, k))    # S(e, k) -> S(e, k) - a' S(e, f) ... = 0
    g = n // 2
    # basis order (e1, f1, e2, f2, ...) with S(e, f) = 1; put f's first
    order = [2 * i + 1 for i in range(g)] + [2 * i for i in range(g)]
    vm = [[vm[a][b] for b in order] for a in order]
    pm = [[r[b] for b in order] for r in pm]
    out = SymplecticNormalization(
        P=tuple(tuple(r) for r in zip(*pm)), normalized=tuple(tuple(r) for r in vm))
    if not out.check(v):
        raise ArithmeticError("symplectic normalization failed its self-check")
    return out


# ---------------------------------------------------------------------------
# Bundle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalInvariants:
    seifert: tuple[tuple[int, ...], ...]
    alexander: LaurentPoly
    conway: LaurentPoly
    determinant: int
    signature: int

    @property
    def a2(self) -> int:
        return self.conway.coeff(2)

    @property
    def a4(self) -> int:
        return self.conway.coeff(4)

    @property
    def genus_lower_bound(self) -> int:
        return self.alexander.max_exp if not self.alexander.is_zero() else 0


def classical_invariants(knot) -> ClassicalInvariants:
    v = seifert_matrix(knot)
    d = alexander(v)
    return ClassicalInvariants(
        seifert=tuple(tuple(r) for r in v),
        alexander=d,
        conway=conway(d),
        determinant=knot_determinant(v),
        signature=signature(v),
    )


# above this size (after the zero-row pass) the modular Burau route is used
MODULAR_THRESHOLD = 80


@lru_cache(maxsize=256)
def _alexander_piece(b: BraidWord) -> LaurentPoly:
    v = reduce_zero_rows(collins_seifert(b))
    if len(v) <= MODULAR_THRESHOLD:
        return alexander(reduce_seifert(v))
    from .modular import alexander_modular

    return alexander_modular(b)


def alexander_of(knot) -> LaurentPoly:
    """Delta of a knot; braids that are visibly connected sums are split
    and long braids go through the modular route."""
    b = as_braid(knot)
    if not b.is_knot():
        raise DiagramError("Alexander polynomial requested for a link")
    out = LaurentPoly.const(1)
    for piece in split_braid_sum(b):
        out = out * _alexander_piece(piece)
    return out


def signature_of(knot) -> int:
    """Signature, summed over visible connected summands."""
    b = as_braid(knot)
    if not b.is_knot():
        raise DiagramError("signature requested for a link")
    return sum(signature(seifert_matrix(piece)) for piece in split_braid_sum(b))
