"""Weierstrass models over Q and F_p, point counting and division polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm

import numpy as np

from .arith import (
    PolyFp,
    as_rational,
    check_prime,
    divisors,
    poly_mul,
    poly_reduce,
    poly_sub,
    reduce_rational,
)
from .errors import BadReduction, InvalidArgument, SingularCurve, Unsupported


def _b_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


@dataclass(frozen=True)
class CurveQ:
    """``y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`` over Q."""

    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.discriminant == 0:
            raise SingularCurve(f"singular model [{self}]")

    @classmethod
    def parse(cls, text: str) -> "CurveQ":
        """Parse ``"a1,a2,a3,a4,a6"``; ``"a4,a6"`` is short Weierstrass form."""
        parts = [s for s in text.replace(" ", "").split(",")]
        if len(parts) == 2:
            parts = ["0", "0", "0"] + parts
        if len(parts) != 5 or not all(parts):
            raise InvalidArgument(f"curve must be 'a1,a2,a3,a4,a6', got {text!r}")
        return cls(*(as_rational(s) for s in parts))

    @classmethod
    def short(cls, a4, a6) -> "CurveQ":
        return cls(0, 0, 0, a4, a6)

    @property
    def ainvs(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b_invariants(self):
        return _b_invariants(*self.ainvs)

    @property
    def c4(self) -> Fraction:
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @property
    def c6(self) -> Fraction:
        b2, b4, b6, _ = self.b_invariants
        return -b2**3 + 36 * b2 * b4 - 216 * b6

    @property
    def discriminant(self) -> Fraction:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j(self) -> Fraction:
        return self.c4**3 / self.discriminant

    def __str__(self):
        return ",".join(str(a) for a in self.ainvs)


def invariants_of(E: CurveQ) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """``(c4, c6, discriminant, j)`` of a rational model."""
    return E.c4, E.c6, E.discriminant, E.j


@dataclass(frozen=True)
class CurveFp:
    p: int
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b_invariants(self):
        p = self.p
        return tuple(b % p for b in _b_invariants(*self.ainvs))

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return (-b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6) % self.p

    @property
    def j(self) -> int:
        b2, b4, _, _ = self.b_invariants
        c4 = (b2 * b2 - 24 * b4) % self.p
        return c4**3 * pow(self.discriminant, -1, self.p) % self.p

    def contains(self, x: int, y: int) -> bool:
        a1, a2, a3, a4, a6 = self.ainvs
        lhs = y * y + a1 * x * y + a3 * y
        rhs = x**3 + a2 * x * x + a4 * x + a6
        return (lhs - rhs) % self.p == 0


def reduce_mod(E: CurveQ, p: int) -> CurveFp:
    """Reduce ``E`` modulo ``p``; raises :class:`BadReduction` when not good."""
    check_prime(p)
    try:
        coeffs = [reduce_rational(a, p) for a in E.ainvs]
    except InvalidArgument:
        raise BadReduction(p, "coefficient denominator divisible by p") from None
    red = CurveFp(p, *coeffs)
    if red.discriminant == 0:
        raise BadReduction(p)
    return red


def good_primes(E: CurveQ, primes):
    """Filter ``primes`` down to those of good reduction for ``E``."""
    out = []
    for p in primes:
        try:
            reduce_mod(E, p)
        except BadReduction:
            continue
        out.append(p)
    return out


@dataclass(frozen=True)
class TraceRecord:
    p: int
    count: int
    a_p: int


def _two_division_poly(E: CurveFp) -> list[int]:
    b2, b4, b6, _ = E.b_invariants
    return poly_reduce([b6, 2 * b4, b2, 4], E.p)


def count_points_naive(E: CurveFp) -> int:
    """Exhaustive enumeration of affine points plus infinity (any p)."""
    return 1 + sum(1 for x in range(E.p) for y in range(E.p) if E.contains(x, y))


def _char_sum(cubic: list[int], p: int) -> int:
    # sum over x of the quadratic character of cubic(x), numpy-vectorised
    if p < 3_000_000_000:
        x = np.arange(p, dtype=np.int64)
        v = np.zeros(p, dtype=np.int64)
        for c in reversed(cubic):
            v = (v * x + c) % p
        is_sq = np.zeros(p, dtype=bool)
        is_sq[(x * x) % p] = True
        nonzero = v != 0
        return int(2 * np.count_nonzero(is_sq[v] & nonzero) - np.count_nonzero(nonzero))
    total = 0
    for xv in range(p):
        val = 0
        for c in reversed(cubic):
            val = (val * xv + c) % p
        if val:
            total += 1 if pow(val, (p - 1) // 2, p) == 1 else -1
    return total


def trace(E: CurveFp) -> TraceRecord:
    """Point count and trace of Frobenius ``a_p = p + 1 - #E(F_p)``."""
    p = E.p
    if p == 2:
        count = count_points_naive(E)
    else:
        # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
        count = p + 1 + _char_sum(_two_division_poly(E), p)
    return TraceRecord(p, count, p + 1 - count)


@lru_cache(maxsize=65536)
def _trace_cached(E: CurveQ, p: int) -> TraceRecord:
    return trace(reduce_mod(E, p))


def trace_of(E: CurveQ, p: int) -> TraceRecord:
    """Reduce and count, memoised per (curve, prime)."""
    return _trace_cached(E, p)


def hasse_ok(r: TraceRecord) -> bool:
    return r.a_p * r.a_p <= 4 * r.p


def is_supersingular(r: TraceRecord) -> bool:
    if r.p < 5:
        raise Unsupported("supersingularity test is only used for p >= 5")
    return r.a_p == 0


def division_poly(E: CurveFp, q: int) -> PolyFp:
    """The ``q``-division polynomial in ``x`` alone for odd ``q >= 3``.

    Degree ``(q^2 - 1)/2`` with leading coefficient ``q``.
    """
    if q % 2 == 0 or q < 3:
        raise Unsupported("division_poly needs odd q >= 3; use two_division_poly for q = 2")
    p = E.p
    if q % p == 0:
        raise InvalidArgument(f"p={p} divides q={q}")
    b2, b4, b6, b8 = E.b_invariants
    F = poly_reduce([b6, 2 * b4, b2, 4], p)
    F2 = poly_mul(F, F, p)
    # f[n] = psi_n for odd n, psi_n / psi_2 for even n
    f: dict[int, list[int]] = {
        0: [],
        1: [1],
        2: [1],
        3: poly_reduce([b8, 3 * b6, 3 * b4, b2, 3], p),
        4: poly_reduce(
            [
                b4 * b8 - b6 * b6,
                b2 * b8 - b4 * b6,
                10 * b8,
                10 * b6,
                5 * b4,
                b2,
                2,
            ],
            p,
        ),
    }

    def get(n: int) -> list[int]:
        if n in f:
            return f[n]
        m = n // 2
        if n % 2:
            t1 = poly_mul(get(m + 2), _cube(get(m), p), p)
            t2 = poly_mul(get(m - 1), _cube(get(m + 1), p), p)
            if m % 2 == 0:
                t1 = poly_mul(F2, t1, p)
            else:
                t2 = poly_mul(F2, t2, p)
            out = poly_sub(t1, t2, p)
        else:
            t1 = poly_mul(get(m + 2), _square(get(m - 1), p), p)
            t2 = poly_mul(get(m - 2), _square(get(m + 1), p), p)
            out = poly_mul(get(m), poly_sub(t1, t2, p), p)
        f[n] = out
        return out

    return PolyFp(p, tuple(get(q)))


def _square(a, p):
    return poly_mul(a, a, p)


def _cube(a, p):
    return poly_mul(poly_mul(a, a, p), a, p)


def two_division_poly(E: CurveFp) -> PolyFp:
    """``4x^3 + b2 x^2 + 2 b4 x + b6``, whose roots are the 2-torsion x-coordinates."""
    return PolyFp(E.p, tuple(_two_division_poly(E)))


def _rational_roots(coeffs_low: list[Fraction]) -> set[Fraction]:
    # rational root theorem on the integer-scaled polynomial
    den = lcm(*(c.denominator for c in coeffs_low))
    ints = [int(c * den) for c in coeffs_low]
    while ints and ints[-1] == 0:
        ints.pop()
    roots: set[Fraction] = set()
    if ints and ints[0] == 0:
        roots.add(Fraction(0))
        while ints[0] == 0:
            ints.pop(0)
    if len(ints) <= 1:
        return roots
    for num in divisors(ints[0]):
        for den_ in divisors(ints[-1]):
            for cand in (Fraction(num, den_), Fraction(-num, den_)):
                if sum(c * cand**i for i, c in enumerate(ints)) == 0:
                    roots.add(cand)
    return roots


def two_torsion_count_Q(E: CurveQ) -> int:
    """Number of rational 2-torsion points (including infinity): 1, 2 or 4."""
    b2, b4, b6, _ = E.b_invariants
    return 1 + len(_rational_roots([b6, 2 * b4, b2, Fraction(4)]))
