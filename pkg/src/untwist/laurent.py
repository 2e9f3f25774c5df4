"""Exact one-variable Laurent polynomials over Z, fractions thereof, and
square matrices over Z[t, t^-1].

Coefficients are Python ints, so nothing ever overflows.  ``t`` is the
default variable name; Jones polynomials are printed in ``q``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from typing import Iterable, Sequence

__all__ = [
    "LaurentPoly",
    "RationalFn",
    "LambdaMatrix",
    "T",
    "ONE",
    "ZERO",
    "involute",
    "conj_transpose",
    "det",
    "evaluate",
    "derivative",
    "reduce_mod_lambda",
    "parse_poly",
]


def _strip(min_exp: int, coeffs: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    lo, hi = 0, len(coeffs)
    while lo < hi and coeffs[lo] == 0:
        lo += 1
    while hi > lo and coeffs[hi - 1] == 0:
        hi -= 1
    if lo == hi:
        return 0, ()
    return min_exp + lo, tuple(coeffs[lo:hi])


@dataclass(frozen=True, init=False)
class LaurentPoly:
    """sum(coeffs[i] * t**(min_exp + i)); the zero polynomial has no coeffs."""

    min_exp: int
    coeffs: tuple[int, ...]

    def __init__(self, min_exp: int = 0, coeffs: Iterable[int] = ()):
        m, c = _strip(min_exp, [int(x) for x in coeffs])
        object.__setattr__(self, "min_exp", m)
        object.__setattr__(self, "coeffs", c)

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls(0, (c,))

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> "LaurentPoly":
        return cls(e, (c,))

    @classmethod
    def from_dict(cls, terms: dict[int, int]) -> "LaurentPoly":
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls(lo, [terms.get(e, 0) for e in range(lo, hi + 1)])

    def to_dict(self) -> dict[int, int]:
        return {self.min_exp + i: c for i, c in enumerate(self.coeffs) if c}

    # -- shape ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def max_exp(self) -> int:
        return self.min_exp + len(self.coeffs) - 1

    @property
    def span(self) -> int:
        """max_exp - min_exp; -1 for zero."""
        return len(self.coeffs) - 1

    def coeff(self, e: int) -> int:
        i = e - self.min_exp
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def trailing(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def is_unit(self) -> bool:
        """True for +-t^k, the units of Z[t, t^-1]."""
        return len(self.coeffs) == 1 and abs(self.coeffs[0]) == 1

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.min_exp, other.min_exp)
        hi = max(self.max_exp, other.max_exp)
        out = [0] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs):
            out[self.min_exp - lo + i] += c
        for i, c in enumerate(other.coeffs):
            out[other.min_exp - lo + i] += c
        return LaurentPoly(lo, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.min_exp, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return LaurentPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return LaurentPoly(self.min_exp + other.min_exp, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_unit():
                raise ValueError("only units have negative powers in Z[t^+-1]")
            return LaurentPoly(-self.min_exp * (-n), (self.coeffs[0] ** (-n),))
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by t^k."""
        if self.is_zero():
            return self
        return LaurentPoly(self.min_exp + k, self.coeffs)

    def divmod_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient in Z[t^+-1]; raises if other does not divide self."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if self.is_zero():
            return LaurentPoly()
        num = list(self.coeffs)
        d = other.coeffs
        if len(num) < len(d):
            raise ArithmeticError("not an exact division")
        q = [0] * (len(num) - len(d) + 1)
        for i in range(len(q) - 1, -1, -1):
            c = num[i + len(d) - 1]
            if c % d[-1]:
                raise ArithmeticError("not an exact division")
            qc = c // d[-1]
            q[i] = qc
            if qc:
                for j, dc in enumerate(d):
                    num[i + j] -= qc * dc
        if any(num):
            raise ArithmeticError("not an exact division")
        return LaurentPoly(self.min_exp - other.min_exp, q)

    def __truediv__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        return RationalFn(self, other)

    def __rtruediv__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        return RationalFn(other, self)

    # -- substitutions ----------------------------------------------------
    def involute(self) -> "LaurentPoly":
        """t -> t^-1."""
        if self.is_zero():
            return self
        return LaurentPoly(-self.max_exp, reversed(self.coeffs))

    def substitute_power(self, k: int) -> "LaurentPoly":
        """t -> t^k for k != 0."""
        if k == 0:
            raise ValueError("t -> t^0 is not a ring automorphism")
        return LaurentPoly.from_dict({e * k: c for e, c in self.to_dict().items()})

    def __call__(self, x):
        return evaluate(self, x)

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly.from_dict({e - 1: e * c for e, c in self.to_dict().items() if e})

    # -- normal forms -------------------------------------------------------
    def normalized(self) -> "LaurentPoly":
        """Representative of the class up to +-t^k: min exponent 0, leading
        coefficient positive."""
        if self.is_zero():
            return self
        sign = -1 if self.coeffs[-1] < 0 else 1
        return LaurentPoly(0, [sign * c for c in self.coeffs])

    def equals_up_to_unit(self, other: "LaurentPoly") -> bool:
        return self.normalized() == other.normalized()

    def is_symmetric(self) -> bool:
        return self == self.involute()

    # -- text -------------------------------------------------------------
    def format(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for e, c in sorted(self.to_dict().items()):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                mono = var if e == 1 else f"{var}^{e}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.format()!r})"


def _lift(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    return NotImplemented


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
T = LaurentPoly.monomial(1)

_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+)\s*\*?\s*)?(?:([A-Za-z])(?:\s*\^\s*\(?\s*(-?\d+)\s*\)?)?)?"
)


def parse_poly(text: str, var: str | None = None) -> LaurentPoly:
    """Parse the ``c*t^e`` text format, e.g. ``"t^-1 - 1 + t"``.

    Any single-letter variable is accepted unless ``var`` pins one down.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    terms: dict[int, int] = {}
    pos = 0
    first = True
    seen_var = var
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        sign, num, v, exp = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing operator near {s[pos:]!r}")
        if num is None and v is None:
            raise ValueError(f"dangling sign in {text!r}")
        if v is not None:
            if seen_var is None:
                seen_var = v
            elif v != seen_var:
                raise ValueError(f"mixed variables {seen_var!r} and {v!r}")
            e = int(exp) if exp is not None else 1
        else:
            if exp is not None:
                raise ValueError(f"exponent without variable in {text!r}")
            e = 0
        c = int(num) if num is not None else 1
        if sign == "-":
            c = -c
        terms[e] = terms.get(e, 0) + c
        first = False
        pos = m.end()
    return LaurentPoly.from_dict(terms)


# ---------------------------------------------------------------------------
# Dense polynomial helpers over Q (lists of Fractions, index = exponent).
# ---------------------------------------------------------------------------

def _qtrim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _qdivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    b = _qtrim(list(b))
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = Fraction(b[-1])
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bc in enumerate(b):
                a[i + j] -= c * bc
    return _qtrim(q), _qtrim(a[: len(b) - 1])


def _primitive_part(p: list) -> list[int]:
    """Scale a rational dense polynomial to a primitive integer one with
    positive leading coefficient."""
    p = _qtrim([Fraction(c) for c in p])
    if not p:
        return []
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def _poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Primitive gcd of the polynomial parts (min exponents stripped)."""
    x = [Fraction(c) for c in a.coeffs]
    y = [Fraction(c) for c in b.coeffs]
    while y:
        _, r = _qdivmod(x, y)
        x, y = y, r
    return LaurentPoly(0, _primitive_part(x))


@dataclass(frozen=True, init=False)
class RationalFn:
    """Reduced fraction num/den of Laurent polynomials, an element of Q(t).

    Canonical form: den has min exponent 0 and positive leading coefficient,
    num and den share no polynomial factor and no integer content, so ``==``
    is equality in Q(t).
    """

    num: LaurentPoly
    den: LaurentPoly

    def __init__(self, num, den=ONE):
        num = _lift(num) if not isinstance(num, LaurentPoly) else num
        den = _lift(den) if not isinstance(den, LaurentPoly) else den
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RationalFn needs Laurent polynomial or int parts")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            object.__setattr__(self, "num", ZERO)
            object.__setattr__(self, "den", ONE)
            return
        # strip powers of t from den into num
        num = num.shift(-den.min_exp)
        den = den.shift(-den.min_exp)
        g = _poly_gcd(num, den)
        if g.span > 0:
            num = num.shift(-num.min_exp).divmod_exact(g).shift(num.min_exp)
            den = den.divmod_exact(g)
        c = gcd(num.content(), den.content())
        if den.leading < 0:
            c = -c
        if c != 1:
            num = LaurentPoly(num.min_exp, [x // c for x in num.coeffs])
            den = LaurentPoly(den.min_exp, [x // c for x in den.coeffs])
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def from_fraction(cls, f: Fraction) -> "RationalFn":
        return cls(LaurentPoly.const(f.numerator), LaurentPoly.const(f.denominator))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        """True when this lies in Z[t^+-1]."""
        return self.den == ONE

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.num

    def __add__(self, other):
        other = _rlift(other)
        if other is NotImplemented:
            return other
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __sub__(self, other):
        other = _rlift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _rlift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _rlift(other)
        if other is NotImplemented:
            return other
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _rlift(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _rlift(other)
        if other is NotImplemented:
            return other
        return other / self

    def involute(self) -> "RationalFn":
        return RationalFn(self.num.involute(), self.den.involute())

    def __call__(self, x):
        return evaluate(self, x)

    def format(self, var: str = "t") -> str:
        if self.den == ONE:
            return self.num.format(var)
        return f"({self.num.format(var)})/({self.den.format(var)})"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"RationalFn({self.format()!r})"


def _rlift(x):
    if isinstance(x, RationalFn):
        return x
    if isinstance(x, LaurentPoly):
        return RationalFn(x)
    if isinstance(x, int):
        return RationalFn(LaurentPoly.const(x))
    if isinstance(x, Fraction):
        return RationalFn.from_fraction(x)
    return NotImplemented


def involute(p):
    """Apply t -> t^-1 to a polynomial or rational function."""
    return p.involute()


def evaluate(p, x) -> Fraction:
    """Exact value of a Laurent polynomial or rational function at a
    nonzero rational point."""
    x = Fraction(x)
    if x == 0:
        raise ZeroDivisionError("Laurent polynomials cannot be evaluated at 0")
    if isinstance(p, RationalFn):
        d = evaluate(p.den, x)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at {x}")
        return evaluate(p.num, x) / d
    total = Fraction(0)
    for c in reversed(p.coeffs):  # Horner on the polynomial part
        total = total * x + c
    return total * x ** p.min_exp


def derivative(p: LaurentPoly) -> LaurentPoly:
    return p.derivative()


def reduce_mod_lambda(f) -> RationalFn:
    """Canonical representative of the class of f in Q(t)/Z[t^+-1].

    With den normalized to an ordinary polynomial with den(0) != 0, the
    quotient Q[t^+-1]/(den) has basis 1, t, ..., t^(deg-1); f splits as
    r/den + g with r in that window and g in Q[t^+-1].  Only the fractional
    parts of g's coefficients survive modulo Z[t^+-1].  The representative
    r/den + frac(g) is unique, and it is zero exactly when f lies in Z[t^+-1].
    """
    f = _rlift(f)
    if f.is_zero() or f.is_laurent():
        return RationalFn(ZERO)
    d = [Fraction(c) for c in f.den.coeffs]  # min_exp 0, d[0] != 0
    n = f.num
    # polynomial part t^max(0, min_exp) * ...
    base = [Fraction(c) for c in n.coeffs]
    shift = n.min_exp
    if shift > 0:
        base = [Fraction(0)] * shift + base
        shift = 0
    _, r = _qdivmod(base, d)
    r = r + [Fraction(0)] * (len(d) - 1 - len(r))
    # multiply by t^-1 modulo d, |shift| times
    for _ in range(-shift):
        if r and r[0] != 0:
            c = r[0] / d[0]
            r = [rc - c * dc for rc, dc in zip(r + [Fraction(0)], d)]
        r = r[1:] + [Fraction(0)] * (len(d) - len(r[1:]) - 1)
        r = r[: len(d) - 1]
    # g = (n - r) / den exactly over Q
    num_q = {n.min_exp + i: Fraction(c) for i, c in enumerate(n.coeffs)}
    for i, c in enumerate(r):
        num_q[i] = num_q.get(i, Fraction(0)) - c
    lo = min(num_q)
    dense = [Fraction(0)] * (max(num_q) - lo + 1)
    for e, c in num_q.items():
        dense[e - lo] = c
    g, rem = _qdivmod(dense, d)
    if any(rem):
        raise ArithmeticError("internal error: remainder not exact")
    frac_g = {lo + i: c - floor(c) for i, c in enumerate(g) if c != floor(c)}
    # assemble r/d + frac(g) as one fraction with integer parts
    result = RationalFn(ZERO)
    if any(r):
        result = result + _qfrac(dict(enumerate(r)), f.den)
    if frac_g:
        result = result + _qfrac(frac_g, ONE)
    return result


def _qfrac(terms: dict[int, Fraction], den: LaurentPoly) -> RationalFn:
    """sum(c t^e) / den with rational c, as a RationalFn."""
    m = 1
    for c in terms.values():
        m = m * c.denominator // gcd(m, c.denominator)
    num = LaurentPoly.from_dict({e: int(c * m) for e, c in terms.items()})
    return RationalFn(num, den * m)


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True, init=False)
class LambdaMatrix:
    """Square matrix with LaurentPoly (or RationalFn) entries."""

    rows: tuple[tuple, ...]

    def __init__(self, rows):
        rows = tuple(tuple(_entry(x) for x in row) for row in rows)
        for row in rows:
            if len(row) != len(rows):
                raise ValueError("LambdaMatrix must be square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n: int) -> "LambdaMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_int(cls, m) -> "LambdaMatrix":
        return cls([[LaurentPoly.const(int(x)) for x in row] for row in m])

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other: "LambdaMatrix") -> "LambdaMatrix":
        return LambdaMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "LambdaMatrix") -> "LambdaMatrix":
        return LambdaMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __matmul__(self, other: "LambdaMatrix") -> "LambdaMatrix":
        n = self.size
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = ZERO
                for k in range(n):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LambdaMatrix(out)

    def scale(self, c) -> "LambdaMatrix":
        return LambdaMatrix([[c * a for a in r] for r in self.rows])

    def transpose(self) -> "LambdaMatrix":
        return LambdaMatrix(list(zip(*self.rows)) if self.rows else [])

    def conj_transpose(self) -> "LambdaMatrix":
        return LambdaMatrix([[a.involute() for a in r] for r in zip(*self.rows)] if self.rows else [])

    def is_hermitian(self) -> bool:
        return self.conj_transpose() == self

    def entries_in_lambda(self) -> bool:
        return all(isinstance(a, LaurentPoly) or a.is_laurent() for r in self.rows for a in r)

    def to_laurent(self) -> "LambdaMatrix":
        return LambdaMatrix([[a if isinstance(a, LaurentPoly) else a.as_laurent() for a in r] for r in self.rows])

    def at(self, x) -> list[list[Fraction]]:
        return [[evaluate(a, x) for a in r] for r in self.rows]

    def det(self):
        return det(self)

    def __str__(self) -> str:
        return "[" + ",\n ".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.rows) + "]"


def _entry(x):
    if isinstance(x, RationalFn):
        return x.num if x.is_laurent() else x
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    if isinstance(x, Fraction):
        return _entry(RationalFn.from_fraction(x))
    raise TypeError(f"unsupported matrix entry {x!r}")


def conj_transpose(a: LambdaMatrix) -> LambdaMatrix:
    return a.conj_transpose()


def det(a: LambdaMatrix) -> RationalFn:
    """Exact determinant.

    Laurent entries go through fraction-free Bareiss elimination, so every
    intermediate stays in Z[t^+-1]; rational entries use plain Gaussian
    elimination over Q(t).
    """
    n = a.size
    if n == 0:
        return RationalFn(ONE)
    if a.entries_in_lambda():
        return RationalFn(_bareiss([[x if isinstance(x, LaurentPoly) else x.as_laurent() for x in r] for r in a.rows]))
    m = [[_rlift(x) for x in r] for r in a.rows]
    sign = 1
    acc = RationalFn(ONE)
    for k in range(n):
        piv = next((i for i in range(k, n) if not m[i][k].is_zero()), None)
        if piv is None:
            return RationalFn(ZERO)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        acc = acc * m[k][k]
        for i in range(k + 1, n):
            if m[i][k].is_zero():
                continue
            f = m[i][k] / m[k][k]
            m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return acc if sign == 1 else -acc


def _bareiss(m: list[list[LaurentPoly]]) -> LaurentPoly:
    n = len(m)
    m = [list(r) for r in m]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            piv = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if piv is None:
                return ZERO
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pkk = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (pkk * m[i][j] - m[i][k] * m[k][j]).divmod_exact(prev)
            m[i][k] = ZERO
        prev = pkk
    d = m[n - 1][n - 1]
    return d if sign == 1 else -d
