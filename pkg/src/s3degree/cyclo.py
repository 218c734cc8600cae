"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, zeta, ..., zeta^(phi(N)-1), reduced
modulo the N-th cyclotomic polynomial, with :class:`fractions.Fraction`
coefficients.  Two values of the same order are equal iff their coefficient
tuples are equal; values of different orders are compared after
:func:`cyc_embed` into a common order.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

__all__ = [
    "CycloNum",
    "cyclotomic_poly",
    "euler_phi",
    "cyc_make_root",
    "cyc_from_rational",
    "cyc_zero",
    "cyc_one",
    "cyc_add",
    "cyc_sub",
    "cyc_mul",
    "cyc_neg",
    "cyc_inv",
    "cyc_embed",
    "cyc_conj",
    "common_order",
]


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # integer polynomials, lowest degree first; den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact cyclotomic division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


def _reduce(coeffs: Sequence[Fraction], n: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    c = [Fraction(x) for x in coeffs]
    for i in range(len(c) - 1, deg - 1, -1):
        lead = c[i]
        if lead:
            shift = i - deg
            for j in range(deg):
                if phi[j]:
                    c[shift + j] -= lead * phi[j]
            c[i] = Fraction(0)
    c = c[:deg] + [Fraction(0)] * (deg - len(c))
    return tuple(c)


@dataclass(frozen=True)
class CycloNum:
    """An element of Q(zeta_N) in canonical power-basis form."""

    order_N: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != euler_phi(self.order_N):
            raise ValueError("coefficient vector length must equal phi(N)")

    def __add__(self, other):
        return cyc_add(self, _coerce(other, self.order_N))

    __radd__ = __add__

    def __sub__(self, other):
        return cyc_sub(self, _coerce(other, self.order_N))

    def __rsub__(self, other):
        return cyc_sub(_coerce(other, self.order_N), self)

    def __mul__(self, other):
        return cyc_mul(self, _coerce(other, self.order_N))

    __rmul__ = __mul__

    def __neg__(self):
        return cyc_neg(self)

    def __truediv__(self, other):
        return cyc_mul(self, cyc_inv(_coerce(other, self.order_N)))

    def __pow__(self, e: int):
        if e < 0:
            return cyc_inv(self) ** (-e)
        result, base = cyc_one(self.order_N), self
        while e:
            if e & 1:
                result = cyc_mul(result, base)
            base = cyc_mul(base, base)
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.order_N)
        return complex(sum(complex(float(c)) * z**i for i, c in enumerate(self.coeffs) if c))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z{self.order_N}^{i}")
        return "CycloNum(" + (" + ".join(terms) or "0") + ")"


def _coerce(x, n: int) -> CycloNum:
    if isinstance(x, CycloNum):
        return x
    if isinstance(x, (int, Fraction)):
        return cyc_from_rational(n, x)
    raise TypeError(f"cannot use {type(x).__name__} as a cyclotomic number")


def _check_order(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"cyclotomic order must be a positive integer, got {n!r}")


def cyc_from_rational(n: int, r) -> CycloNum:
    _check_order(n)
    c = [Fraction(0)] * euler_phi(n)
    c[0] = Fraction(r)
    return CycloNum(n, tuple(c))


def cyc_zero(n: int) -> CycloNum:
    return cyc_from_rational(n, 0)


def cyc_one(n: int) -> CycloNum:
    return cyc_from_rational(n, 1)


def cyc_make_root(n: int, k: int) -> CycloNum:
    """zeta_n ** k in canonical form."""
    _check_order(n)
    k %= n
    c = [Fraction(0)] * (k + 1)
    c[k] = Fraction(1)
    return CycloNum(n, _reduce(c, n))


def _same(x: CycloNum, y: CycloNum) -> None:
    if x.order_N != y.order_N:
        raise ValueError(
            f"operands live in Q(zeta_{x.order_N}) and Q(zeta_{y.order_N}); embed first"
        )


def cyc_add(x: CycloNum, y: CycloNum) -> CycloNum:
    _same(x, y)
    return CycloNum(x.order_N, tuple(a + b for a, b in zip(x.coeffs, y.coeffs)))


def cyc_sub(x: CycloNum, y: CycloNum) -> CycloNum:
    _same(x, y)
    return CycloNum(x.order_N, tuple(a - b for a, b in zip(x.coeffs, y.coeffs)))


def cyc_neg(x: CycloNum) -> CycloNum:
    return CycloNum(x.order_N, tuple(-a for a in x.coeffs))


def cyc_mul(x: CycloNum, y: CycloNum) -> CycloNum:
    _same(x, y)
    prod = [Fraction(0)] * (2 * len(x.coeffs) - 1)
    for i, a in enumerate(x.coeffs):
        if a:
            for j, b in enumerate(y.coeffs):
                if b:
                    prod[i + j] += a * b
    return CycloNum(x.order_N, _reduce(prod, x.order_N))


def _strip(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _polydivmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(_strip(a)) >= len(b):
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for j, c in enumerate(b):
            a[shift + j] -= f * c
    return _strip(q), a


def _polymul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _polysub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _strip([x - y for x, y in zip(a, b)])


def cyc_inv(x: CycloNum) -> CycloNum:
    """Multiplicative inverse via the extended Euclidean algorithm mod Phi_N."""
    if x.is_zero():
        raise ZeroDivisionError("inverse of zero in a cyclotomic field")
    n = x.order_N
    r0 = [Fraction(c) for c in cyclotomic_poly(n)]
    r1 = _strip(list(x.coeffs))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _polydivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _polysub(s0, _polymul(q, s1))
    # r1 is a nonzero constant since Phi_N is irreducible
    c = r1[0]
    return CycloNum(n, _reduce([v / c for v in s1], n))


def cyc_embed(x: CycloNum, m: int) -> CycloNum:
    """Represent ``x`` in Q(zeta_m); requires order_N | m."""
    _check_order(m)
    if m % x.order_N:
        raise ValueError(f"cannot embed Q(zeta_{x.order_N}) into Q(zeta_{m})")
    step = m // x.order_N
    c = [Fraction(0)] * (step * (len(x.coeffs) - 1) + 1)
    for i, a in enumerate(x.coeffs):
        c[i * step] = a
    return CycloNum(m, _reduce(c, m))


def cyc_conj(x: CycloNum) -> CycloNum:
    """Image under zeta -> zeta^-1 (complex conjugation)."""
    n = x.order_N
    c = [Fraction(0)] * n
    for i, a in enumerate(x.coeffs):
        c[(-i) % n] += a
    return CycloNum(n, _reduce(c, n))


def common_order(*xs: CycloNum) -> int:
    return math.lcm(*(x.order_N for x in xs))
