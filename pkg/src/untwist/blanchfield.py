"""Hermitian presentation matrix of the Blanchfield pairing, the pairing
itself in Q(t)/Z[t^+-1], and integer congruence witnesses that bound the
size of such presentations from above.

Starting from a Seifert matrix with V - V^T = [[0, -I], [I, 0]] (the output
of ``classical.symplectic_normalize``) the basis is first changed by
diag(I, -I), which turns the antisymmetrization into [[0, I], [-I, 0]] and
puts V in the block shape [[B, C + I], [C^T, D]].  Then

    A(t) = L1 V R1 + L2 V^T R2,
    L1 = diag((1 - t^-1)^-1 I, I),  R1 = diag(I, (1 - t) I),
    L2 = diag(I, (1 - t^-1) I),     R2 = diag((1 - t)^-1 I, I),

which is hermitian with entries in Z[t^+-1], A(1) = [[B, -I], [-I, 0]],
and det A(t) equal to Delta(t) up to a unit.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .classical import (
    IntMatrix,
    SymplecticNormalization,
    _rational_det,
    seifert_matrix,
    symplectic_normalize,
)
from .laurent import (
    ONE,
    T,
    ZERO,
    LambdaMatrix,
    LaurentPoly,
    RationalFn,
    det as lambda_det,
    reduce_mod_lambda,
)

__all__ = [
    "BlanchfieldMatrix",
    "PairingValue",
    "CongruenceWitness",
    "build_A",
    "blanchfield_matrix",
    "pairing",
    "diagonal_pm1_witness",
    "n_upper_bound",
]


@dataclass(frozen=True)
class BlanchfieldMatrix:
    A: LambdaMatrix
    k: int
    B: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return self.A.size

    def at_one(self) -> IntMatrix:
        return [[int(x) for x in r] for r in self.A.at(1)]

    def det(self) -> LaurentPoly:
        return lambda_det(self.A).as_laurent()


@dataclass(frozen=True)
class PairingValue:
    """Class in Q(t)/Z[t^+-1], held as its canonical representative."""

    value: RationalFn

    def __post_init__(self):
        object.__setattr__(self, "value", reduce_mod_lambda(self.value))

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def __add__(self, other: "PairingValue") -> "PairingValue":
        return PairingValue(self.value + other.value)

    def involute(self) -> "PairingValue":
        return PairingValue(self.value.involute())


def _diag_blocks(k: int, top, bottom) -> LambdaMatrix:
    n = 2 * k
    return LambdaMatrix([[(top if i < k else bottom) if i == j else ZERO for j in range(n)] for i in range(n)])


def build_A(norm: SymplecticNormalization) -> BlanchfieldMatrix:
    """The hermitian presentation matrix of the Blanchfield pairing; every
    structural property is asserted."""
    v0 = [list(r) for r in norm.normalized]
    n = len(v0)
    k = n // 2
    if n == 0:
        return BlanchfieldMatrix(LambdaMatrix([]), 0, ())
    sgn = [1] * k + [-1] * k
    v = [[sgn[i] * sgn[j] * v0[i][j] for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            want = 1 if j == i + k else (-1 if i == j + k else 0)
            if v[i][j] - v[j][i] != want:
                raise ValueError("Seifert matrix is not symplectically normalized")
    one_minus_t = ONE - T
    one_minus_ti = ONE - T.involute()
    l1 = _diag_blocks(k, RationalFn(ONE, one_minus_ti), RationalFn(ONE))
    r1 = _diag_blocks(k, RationalFn(ONE), RationalFn(one_minus_t))
    l2 = _diag_blocks(k, RationalFn(ONE), RationalFn(one_minus_ti))
    r2 = _diag_blocks(k, RationalFn(ONE, one_minus_t), RationalFn(ONE))
    vm = LambdaMatrix.from_int(v)
    a = l1 @ vm @ r1 + l2 @ vm.transpose() @ r2
    if not a.entries_in_lambda():
        raise ArithmeticError("A(t) has entries outside Z[t^+-1]")
    a = a.to_laurent()
    if not a.is_hermitian():
        raise ArithmeticError("A(t) is not hermitian")
    b = [row[:k] for row in v[:k]]
    want = [[b[i][j] if i < k and j < k else (-1 if abs(i - j) == k else 0) for j in range(n)] for i in range(n)]
    at1 = [[int(x) for x in r] for r in a.at(1)]
    if at1 != want:
        raise ArithmeticError("A(1) does not have the block form [[B, -I], [-I, 0]]")
    if _rational_det([[Fraction(x) for x in r] for r in at1]) != (-1) ** k:
        raise ArithmeticError("det A(1) != (-1)^k")
    return BlanchfieldMatrix(a, k, tuple(tuple(r) for r in b))


def blanchfield_matrix(knot) -> BlanchfieldMatrix:
    return build_A(symplectic_normalize(seifert_matrix(knot)))


def _solve(a: LambdaMatrix, b: Sequence) -> list[RationalFn]:
    """x with A x = b over Q(t)."""
    n = a.size
    m = [[RationalFn(x) for x in r] + [RationalFn(b[i])] for i, r in enumerate(a.rows)]
    for c in range(n):
        p = next((r for r in range(c, n) if not m[r][c].is_zero()), None)
        if p is None:
            raise ZeroDivisionError("A is singular")
        m[c], m[p] = m[p], m[c]
        inv = RationalFn(ONE) / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and not m[r][c].is_zero():
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][n] for i in range(n)]


def _lift(x) -> LaurentPoly:
    return LaurentPoly.const(x) if isinstance(x, int) else x


def pairing(bm: BlanchfieldMatrix, a: Sequence, b: Sequence) -> PairingValue:
    """conj(a)^T A^-1 b modulo Z[t^+-1]."""
    if len(a) != bm.size or len(b) != bm.size:
        raise ValueError("vector length does not match the matrix")
    x = _solve(bm.A, [_lift(y) for y in b])
    total = RationalFn(ZERO)
    for ai, xi in zip(a, x):
        total = total + RationalFn(_lift(ai).involute()) * xi
    return PairingValue(total)


# ---------------------------------------------------------------------------
# Congruence to a diagonal +-1 matrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CongruenceWitness:
    """P M P^T = diag(diagonal); u_plus counts the -1 entries and u_minus
    the +1 entries."""

    P: tuple[tuple[int, ...], ...]
    diagonal: tuple[int, ...]

    @property
    def u_plus(self) -> int:
        return sum(1 for d in self.diagonal if d == -1)

    @property
    def u_minus(self) -> int:
        return sum(1 for d in self.diagonal if d == 1)

    def verify(self, m: IntMatrix) -> bool:
        n = len(m)
        p = self.P
        if n == 0:
            return not self.diagonal
        pm = [[sum(p[i][a] * m[a][b] for a in range(n)) for b in range(n)] for i in range(n)]
        out = [[sum(pm[i][b] * p[j][b] for b in range(n)) for j in range(n)] for i in range(n)]
        want = [[self.diagonal[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return out == want and abs(_rational_det([[Fraction(x) for x in r] for r in p])) == 1


def _candidates(n: int, radius: int):
    """Nonzero integer vectors with entries in [-radius, radius], small ones
    first, up to sign."""
    vecs = []
    for x in itertools.product(range(-radius, radius + 1), repeat=n):
        if any(x):
            first = next(v for v in x if v)
            if first > 0:
                vecs.append(x)
    vecs.sort(key=lambda x: (sum(abs(v) for v in x), max(abs(v) for v in x), x))
    return vecs


def _complete_basis(x: list[int]) -> list[list[int]]:
    """Unimodular matrix (rows = basis) whose first row is the primitive
    vector x."""
    n = len(x)
    # column operations on a row vector: track the inverse transformation
    # so that x = e_j * Q for the final basis Q
    q = [[int(i == j) for j in range(n)] for i in range(n)]
    v = list(x)
    # v is the coordinate row of x in the basis given by rows of q:
    # x = sum_i v_i q_i.  Row op q_p <- q_p + c q_i keeps x if v_i -> v_i - c v_p.
    while sum(1 for a in v if a) > 1:
        nz = [i for i, a in enumerate(v) if a]
        p = min(nz, key=lambda i: abs(v[i]))
        for i in nz:
            if i != p:
                c = v[i] // v[p]
                q[p] = [a + c * b for a, b in zip(q[p], q[i])]
                v[i] -= c * v[p]
    j = next(i for i, a in enumerate(v) if a)
    if abs(v[j]) != 1:
        raise ValueError("vector is not primitive")
    first = [v[j] * a for a in q[j]]
    rest = [q[i] for i in range(n) if i != j]
    return [first] + rest


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _split(m: IntMatrix, depth_budget: list[int], radius: int):
    """Recursive search; returns (P, diag) or None."""
    n = len(m)
    if n == 0:
        return [], []
    for x in _candidates(n, radius):
        if depth_budget[0] <= 0:
            return None
        depth_budget[0] -= 1
        mx = [sum(m[i][j] * x[j] for j in range(n)) for i in range(n)]
        val = sum(x[i] * mx[i] for i in range(n))
        if val not in (1, -1):
            continue
        basis = _complete_basis(list(x))
        mb = _matmul(_matmul(basis, m), [list(r) for r in zip(*basis)])
        # clear the first row and column: row_i -= (mb[i][0] / val) row_0
        for i in range(1, n):
            c = mb[i][0] * val
            basis[i] = [a - c * b for a, b in zip(basis[i], basis[0])]
        mb = _matmul(_matmul(basis, m), [list(r) for r in zip(*basis)])
        sub = [r[1:] for r in mb[1:]]
        res = _split(sub, depth_budget, radius)
        if res is None:
            continue
        sp, sd = res
        rows = [basis[0]]
        for r in sp:
            rows.append([sum(r[a] * basis[1 + a][c] for a in range(n - 1)) for c in range(n)])
        return rows, [val] + sd
    return None


def diagonal_pm1_witness(m: IntMatrix, budget: int = 20000, radius: int = 1) -> CongruenceWitness | None:
    """Search for P with P M P^T diagonal with +-1 entries.

    Repeatedly looks for a vector x with x^T M x = +-1, splits it off as an
    orthogonal summand and recurses, backtracking on failure.  Returns None
    when nothing is found within ``budget`` candidate vectors; that means
    "unknown", not "impossible"."""
    n = len(m)
    if any(m[i][j] != m[j][i] for i in range(n) for j in range(n)):
        raise ValueError("matrix is not symmetric")
    if n and abs(_rational_det([[Fraction(x) for x in r] for r in m])) != 1:
        raise ValueError("matrix is not unimodular")
    if n == 0:
        return CongruenceWitness((), ())
    if all(m[i][j] == 0 for i in range(n) for j in range(n) if i != j) and all(abs(m[i][i]) == 1 for i in range(n)):
        return CongruenceWitness(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), tuple(m[i][i] for i in range(n)))
    res = _split([list(r) for r in m], [budget], radius)
    if res is None:
        return None
    w = CongruenceWitness(tuple(tuple(r) for r in res[0]), tuple(res[1]))
    if not w.verify(m):
        raise ArithmeticError("congruence witness failed verification")
    return w


def is_even_form(m: IntMatrix) -> bool:
    """All x^T M x even; such a form is never congruent to diag(+-1)."""
    return all(m[i][i] % 2 == 0 for i in range(len(m)))


def _shear_candidates(v: IntMatrix, k: int):
    """Symplectic changes of basis diag(I,-I)-compatible shears [[I, X], [0, I]]
    with X symmetric, small entries."""
    n = 2 * k
    yield None, v
    for i in range(k):
        for j in range(i, k):
            x = [[0] * k for _ in range(k)]
            x[i][j] = x[j][i] = 1
            p = [[int(a == b) for b in range(n)] for a in range(n)]
            for a in range(k):
                for b in range(k):
                    p[a][k + b] = x[a][b]
            pv = _matmul(p, v)
            yield p, _matmul(pv, [list(r) for r in zip(*p)])


def n_upper_bound(knot=None, v: IntMatrix | None = None, budget: int = 20000):
    """Upper bound for the minimal size of a hermitian presentation of the
    Blanchfield pairing whose value at 1 is diagonal +-1 (which equals
    u_a = tu_a).  Returns a BoundCertificate for tu_a."""
    from .bounds import BoundCertificate, Step

    if v is None:
        v = seifert_matrix(knot)
    if not v:
        return BoundCertificate("tu_a", None, "upper", 0, (Step("alexander_trivial_presentation", {"size": 0}, 0),), "proof")
    norm = symplectic_normalize(v)
    k = norm.k
    for shear, cand in _shear_candidates([list(r) for r in norm.normalized], k):
        p = norm.P if shear is None else tuple(tuple(r) for r in _matmul(shear, [list(r) for r in norm.P]))
        cn = SymplecticNormalization(p, tuple(tuple(r) for r in cand))
        try:
            bm = build_A(cn)
        except (ValueError, ArithmeticError):
            continue
        w = diagonal_pm1_witness(bm.at_one(), budget=budget)
        if w is not None:
            step = Step(
                "blanchfield_witness",
                {"size": bm.size, "A_at_1": bm.at_one(), "P": [list(r) for r in w.P], "diagonal": list(w.diagonal)},
                bm.size,
            )
            return BoundCertificate("tu_a", None, "upper", bm.size, (step,), "proof")
    # stabilize by a 1x1 block [1]: same pairing, odd indefinite form
    bm = build_A(norm)
    a1 = bm.at_one()
    n = len(a1)
    st = [r + [0] for r in a1] + [[0] * n + [1]]
    w = diagonal_pm1_witness(st, budget=budget)
    if w is None:
        return None
    step = Step(
        "blanchfield_witness",
        {"size": n + 1, "A_at_1": st, "P": [list(r) for r in w.P], "diagonal": list(w.diagonal), "stabilized": True},
        n + 1,
    )
    return BoundCertificate("tu_a", None, "upper", n + 1, (step,), "proof")
