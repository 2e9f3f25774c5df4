"""Exact arithmetic in Q(omega) for a root of unity omega = exp(2 pi i k/n),
enough to compute signatures of hermitian matrices over that field."""
from __future__ import annotations

from fractions import Fraction
from math import gcd

import mpmath
import sympy
from sympy import Poly, QQ

_X = sympy.Symbol("x")


class CyclotomicField:
    def __init__(self, k: int, n: int):
        if n < 1:
            raise ValueError("root of unity order must be positive")
        g = gcd(k, n)
        self.k, self.n = (k // g) % (n // g), n // g
        self.modulus = Poly(sympy.cyclotomic_poly(self.n, _X), _X, domain=QQ)
        self.degree = self.modulus.degree()

    def __repr__(self):
        return f"CyclotomicField(exp(2 pi i {self.k}/{self.n}))"

    def elt(self, p) -> Poly:
        if not isinstance(p, Poly):
            p = Poly(p, _X, domain=QQ)
        return p.rem(self.modulus)

    @property
    def omega(self) -> Poly:
        return self.elt(Poly(_X, _X, domain=QQ))

    def const(self, c) -> Poly:
        return Poly(sympy.Rational(c), _X, domain=QQ)

    def power(self, e: int) -> Poly:
        """omega^e for any integer e (omega^n = 1)."""
        return self.elt(Poly(_X ** (e % self.n), _X, domain=QQ))

    def conj(self, a: Poly) -> Poly:
        # x -> x^-1 = x^(n-1)
        out = Poly(0, _X, domain=QQ)
        for (e,), c in a.terms():
            out += Poly(c * _X ** ((-e) % self.n), _X, domain=QQ)
        return self.elt(out)

    def mul(self, a: Poly, b: Poly) -> Poly:
        return (a * b).rem(self.modulus)

    def inv(self, a: Poly) -> Poly:
        if a.is_zero:
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        return a.invert(self.modulus)

    def is_zero(self, a: Poly) -> bool:
        return a.is_zero

    def numeric(self, a: Poly, dps: int = 30):
        with mpmath.workdps(dps):
            z = mpmath.expj(2 * mpmath.pi * self.k / self.n)
            return sum((mpmath.mpf(Fraction(int(c.p), int(c.q)).numerator) / int(c.q)) * z ** e
                       for (e,), c in a.terms()) if not a.is_zero else mpmath.mpc(0)

    def real_sign(self, a: Poly) -> int:
        """Sign of a real element, decided exactly: zero is detected
        symbolically, otherwise precision is raised until the numerical value
        is clearly away from zero."""
        if a.is_zero:
            return 0
        dps = 30
        while dps <= 4000:
            v = self.numeric(a, dps)
            with mpmath.workdps(dps):
                if abs(mpmath.im(v)) > mpmath.mpf(10) ** (-(dps // 2)) * (1 + abs(v)):
                    raise ValueError("element is not real")
                re = mpmath.re(v)
                if abs(re) > mpmath.mpf(10) ** (-(dps - 5)):
                    return 1 if re > 0 else -1
            dps *= 2
        raise ArithmeticError("could not resolve sign of a nonzero element")


def hermitian_signature(field: CyclotomicField, h: list[list[Poly]]) -> tuple[int, int]:
    """(signature, nullity) of a hermitian matrix over the field, by
    congruence diagonalization."""
    n = len(h)
    m = [row[:] for row in h]
    idx = list(range(n))
    pos = neg = zero = 0
    while idx:
        piv = next((i for i in idx if not m[i][i].is_zero), None)
        if piv is None:
            pair = next(((i, j) for i in idx for j in idx if i != j and not m[i][j].is_zero), None)
            if pair is None:
                zero += len(idx)
                break
            i, j = pair
            c = m[i][j]
            cb = field.conj(c)
            # e_i <- e_i + c e_j makes the (i, i) entry 2|h_ij|^2
            for r in idx:
                m[i][r] = field.elt(m[i][r] + field.mul(c, m[j][r]))
            for r in idx:
                m[r][i] = field.elt(m[r][i] + field.mul(m[r][j], cb))
            piv = i
        d = m[piv][piv]
        s = field.real_sign(d)
        if s > 0:
            pos += 1
        else:
            neg += 1
        dinv = field.inv(d)
        rest = [i for i in idx if i != piv]
        for i in rest:
            if m[i][piv].is_zero:
                continue
            f = field.mul(m[i][piv], dinv)
            for j in rest:
                if not m[piv][j].is_zero:
                    m[i][j] = field.elt(m[i][j] - field.mul(f, m[piv][j]))
        idx = rest
    return pos - neg, zero
