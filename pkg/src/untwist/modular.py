"""Exact Alexander polynomials of long braids by modular evaluation.

For a braid b on n strands with reduced Burau matrix B(t),

    det(I - B(t)) = Delta(t) (1 + t + ... + t^(n-1))   (up to +-t^k).

The left side is evaluated at all N-th roots of unity of F_p for several
primes p = 1 (mod N), the cyclic coefficient vectors are recovered by an
inverse DFT and combined by CRT.  A Seifert matrix V of size r (after the
cheap zero-row reduction) gives span <= r + n - 1; choosing N more than
twice that makes the gap between the last and first nonzero coefficient
the longest run of zeros, so the shift is recovered.  The number of primes
follows a Hadamard bound on det(tV - V^T), so the result is exact.
"""
from __future__ import annotations

import math

import numpy as np
import sympy

from .knotio import BraidWord
from .laurent import LaurentPoly

__all__ = ["alexander_modular", "coefficient_bound_bits"]

_PMAX = 2**31


def coefficient_bound_bits(v) -> float:
    """log2 of a bound on every coefficient of det(tV - V^T): on |t| = 1 a
    coefficient is at most the maximum modulus, which Hadamard bounds by the
    product of row 2-norms with entries |V_ij| + |V_ji|."""
    n = len(v)
    total = 0.0
    for i in range(n):
        s = sum((abs(v[i][j]) + abs(v[j][i])) ** 2 for j in range(n))
        if s == 0:
            return 0.0  # a zero row: the determinant vanishes identically
        total += 0.5 * math.log2(s)
    return total


def _primes(n: int, count: int):
    k = (_PMAX - 1) // n
    out = []
    while len(out) < count:
        p = k * n + 1
        if sympy.isprime(p):
            out.append(p)
        k -= 1
        if k <= 0:
            raise ArithmeticError("ran out of NTT primes")
    return out


def _inv_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Elementwise a^(p-2) mod p (a must be nonzero mod p)."""
    result = np.ones_like(a)
    base = a % p
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def _det_batch(m: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a stack of square matrices."""
    m = m.copy()
    batch, n, _ = m.shape
    det = np.ones(batch, dtype=np.int64)
    alive = np.ones(batch, dtype=bool)
    idx = np.arange(batch)
    for c in range(n):
        col = m[:, c:, c] != 0
        alive &= col.any(axis=1)
        piv = c + np.argmax(col, axis=1)
        swap = (piv != c) & alive
        if swap.any():
            rows_c = m[idx[swap], c, :].copy()
            m[idx[swap], c, :] = m[idx[swap], piv[swap], :]
            m[idx[swap], piv[swap], :] = rows_c
            det[swap] = (-det[swap]) % p
        pv = m[:, c, c] % p
        pv[~alive] = 1
        det = det * pv % p
        if c + 1 < n:
            f = m[:, c + 1:, c] * _inv_mod(pv, p)[:, None] % p
            m[:, c + 1:, c:] = (m[:, c + 1:, c:] - f[:, :, None] * m[:, c, c:][:, None, :]) % p
    det[~alive] = 0
    return det


def _powers(w: int, n: int, p: int) -> np.ndarray:
    out = np.empty(n, dtype=np.int64)
    x = 1
    for k in range(n):
        out[k] = x
        x = x * w % p
    return out


def _cyclic_values(b: BraidWord, p: int, n_pts: int) -> np.ndarray:
    """Coefficients of det(I - B(t)) modulo t^N - 1 and p."""
    g = sympy.primitive_root(p)
    w = pow(g, (p - 1) // n_pts, p)
    pts = _powers(w, n_pts, p)
    inv_pts = _inv_mod(pts, p)
    neg_pts, neg_inv = (-pts) % p, (-inv_pts) % p
    d = b.strand_count - 1
    # rows of mt are the columns of the Burau product
    mt = np.zeros((n_pts, d, d), dtype=np.int64)
    for i in range(d):
        mt[:, i, i] = 1
    pc, ic = pts[:, None], inv_pts[:, None]
    npc, nic = neg_pts[:, None], neg_inv[:, None]
    for x in b.letters:
        c = abs(x) - 1
        row = mt[:, c, :]
        if x > 0:
            if c > 0:
                mt[:, c - 1, :] = (mt[:, c - 1, :] + row * pc) % p
            if c + 1 < d:
                mt[:, c + 1, :] = (mt[:, c + 1, :] + row) % p
            mt[:, c, :] = row * npc % p
        else:
            if c > 0:
                mt[:, c - 1, :] = (mt[:, c - 1, :] + row) % p
            if c + 1 < d:
                mt[:, c + 1, :] = (mt[:, c + 1, :] + row * ic) % p
            mt[:, c, :] = row * nic % p
    eye = np.eye(d, dtype=np.int64)
    vals = _det_batch((eye[None, :, :] - mt) % p, p)
    # inverse DFT: c_j = N^-1 sum_k vals_k w^(-jk)
    wpow = _powers(pow(w, p - 2, p), n_pts, p)
    k = np.arange(n_pts)
    ninv = pow(n_pts, p - 2, p)
    out = np.empty(n_pts, dtype=np.int64)
    step = max(1, 2_000_000 // n_pts)
    for j0 in range(0, n_pts, step):
        js = np.arange(j0, min(n_pts, j0 + step))
        mat = wpow[(js[:, None] * k[None, :]) % n_pts]
        out[js] = (mat * vals[None, :] % p).sum(axis=1) % p * ninv % p
    return out


def alexander_modular(b: BraidWord) -> LaurentPoly:
    """Conway-normalized Alexander polynomial of the closure of ``b``."""
    from .classical import collins_seifert, reduce_zero_rows

    n = b.strand_count
    if n == 1 or not b.letters:
        return LaurentPoly.const(1)
    # the reduced Seifert matrix bounds both the span and the coefficients
    v = reduce_zero_rows(collins_seifert(b))
    n_pts = 2 * (len(v) + n - 1) + 2
    bits = coefficient_bound_bits(v) + math.log2(n) + 2
    count = max(1, math.ceil(bits / 30))
    primes = _primes(n_pts, count)
    residues = [_cyclic_values(b, p, n_pts) for p in primes]
    modulus = 1
    coeffs = [0] * n_pts
    for p, r in zip(primes, residues):
        for j in range(n_pts):
            # CRT step: x = coeffs[j] (mod modulus), x = r[j] (mod p)
            a = coeffs[j]
            t = (int(r[j]) - a) * pow(modulus, -1, p) % p
            coeffs[j] = a + modulus * t
        modulus *= p
    half = modulus // 2
    coeffs = [c - modulus if c > half else c for c in coeffs]
    nz = [j for j, c in enumerate(coeffs) if c]
    if not nz:
        raise ArithmeticError("det(I - B) vanished; closure is not a knot")
    # start right after the longest cyclic run of zeros
    best_len, start = -1, 0
    for a, bb in zip(nz, nz[1:] + [nz[0] + n_pts]):
        if bb - a > best_len:
            best_len, start = bb - a, bb % n_pts
    rot = coeffs[start:] + coeffs[:start]
    while rot and rot[-1] == 0:
        rot.pop()
    # exact division by 1 + t + ... + t^(n-1)
    q = []
    rem = rot[:]
    for i in range(len(rem) - n + 1):
        c = rem[i]
        q.append(c)
        for j in range(n):
            rem[i + j] -= c
    if any(rem):
        raise ArithmeticError("Burau determinant is not divisible by (1 - t^n)/(1 - t)")
    delta = LaurentPoly(0, tuple(q))
    span = delta.max_exp - delta.min_exp
    if span % 2:
        raise ArithmeticError("Alexander polynomial has odd span")
    delta = delta.shift(-delta.min_exp - span // 2)

    at1 = sum(delta.coeffs)
    if abs(at1) != 1:
        raise ArithmeticError(f"Delta(1) = {at1}, not +-1")
    return delta if at1 == 1 else -delta
