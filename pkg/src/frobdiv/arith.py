"""Exact integer, rational and prime-field polynomial arithmetic.

Polynomials are coefficient lists ordered from the constant term upward
(``[c0, c1, ..., cn]``) with no trailing zeros.  :class:`PolyFp` wraps such a
list together with its modulus; the free functions operate on bare lists so
the inner loops stay cheap.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from sympy import factorint, isprime

from .errors import InvalidArgument

Rational = Fraction

#: Largest prime accepted by the public entry points.
MAX_PRIME = 2**63


def as_rational(value) -> Fraction:
    """Parse ``value`` (int, Fraction or a string such as ``"-9/6400"``)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidArgument(f"not a rational number: {value!r}") from exc
    raise InvalidArgument(f"expected a rational, got {type(value).__name__}")


def check_prime(p: int, odd: bool = False) -> None:
    if not isinstance(p, int) or p < 2 or p >= MAX_PRIME or not isprime(p):
        raise InvalidArgument(f"{p!r} is not a prime below 2**63")
    if odd and p == 2:
        raise InvalidArgument("an odd prime is required")


def legendre(a: int, p: int) -> int:
    """Legendre symbol ``(a|p)`` for an odd prime ``p``."""
    check_prime(p, odd=True)
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write ``n = D * m**2`` with ``D`` squarefree (same sign as ``n``), ``m > 0``."""
    if n == 0:
        raise InvalidArgument("squarefree_decompose(0) is undefined")
    D, m = (1 if n > 0 else -1), 1
    for prime, e in factorint(abs(n)).items():
        m *= prime ** (e // 2)
        if e % 2:
            D *= prime
    return D, m


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def divisors(n: int) -> list[int]:
    """Positive divisors of ``n != 0`` in increasing order."""
    divs = [1]
    for prime, e in factorint(abs(n)).items():
        divs = [d * prime**k for d in divs for k in range(e + 1)]
    return sorted(divs)


# --- polynomial lists over F_p ------------------------------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_reduce(coeffs: Iterable[int], p: int) -> list[int]:
    return _trim([c % p for c in coeffs])


def poly_add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def poly_sub(a, b, p):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def poly_scale(a, s, p):
    return _trim([c * s % p for c in a])


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def poly_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    if len(r) <= db:
        return [], _trim(r)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] * inv % p
        if c:
            q[k - db] = c
            for j in range(db + 1):
                r[k - db + j] = (r[k - db + j] - c * b[j]) % p
    return _trim(q), _trim(r[:db])


def poly_mod(a, b, p):
    return poly_divmod(a, b, p)[1]


def poly_monic(a, p):
    if not a:
        return []
    return poly_scale(a, pow(a[-1], -1, p), p)


def poly_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, poly_mod(a, b, p)
    return poly_monic(a, p)


def poly_mulmod(a, b, m, p):
    return poly_mod(poly_mul(a, b, p), m, p)


def poly_powmod(base, e, m, p):
    result = [1]
    base = poly_mod(base, m, p)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, m, p)
        e >>= 1
        if e:
            base = poly_mulmod(base, base, m, p)
    return poly_mod(result, m, p)


def poly_deriv(a, p):
    return _trim([i * c % p for i, c in enumerate(a)][1:])


def poly_eval(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


@dataclass(frozen=True)
class PolyFp:
    """A polynomial over the prime field F_p (coefficients low degree first)."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(poly_reduce(self.coeffs, self.p)))

    @classmethod
    def from_high(cls, coeffs_high_first: Sequence[int], p: int) -> "PolyFp":
        return cls(p, tuple(reversed(list(coeffs_high_first))))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: int) -> int:
        return poly_eval(self.coeffs, x, self.p)

    def monic(self) -> "PolyFp":
        return PolyFp(self.p, tuple(poly_monic(list(self.coeffs), self.p)))

    def is_squarefree(self) -> bool:
        f = list(self.coeffs)
        if len(f) <= 2:
            return bool(f)
        return len(poly_gcd(f, poly_deriv(f, self.p), self.p)) == 1


class DegreePartition(tuple):
    """Sorted multiset of factor degrees, e.g. ``(1, 2, 2)`` printed ``(1)(2)^2``."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = sorted(int(d) for d in parts)
        if any(d <= 0 for d in parts):
            raise InvalidArgument("partition parts must be positive")
        return super().__new__(cls, parts)

    @property
    def total(self) -> int:
        return sum(self)

    def __str__(self) -> str:
        out = []
        for d, k in sorted(Counter(self).items()):
            out.append(f"({d})" + (f"^{k}" if k > 1 else ""))
        return "".join(out)

    def __repr__(self) -> str:
        return f"DegreePartition({list(self)})"


def distinct_degree_factor(f: PolyFp) -> DegreePartition | None:
    """Degrees of the irreducible factors of ``f`` over F_p.

    Returns ``None`` when ``f`` is not squarefree mod p (the caller is expected
    to skip that prime), and an empty partition for constants.
    """
    p = f.p
    g = poly_monic(list(f.coeffs), p)
    if not g:
        return None
    if len(g) == 1:
        return DegreePartition()
    if not f.is_squarefree():
        return None
    parts: list[int] = []
    x = [0, 1]
    h = x
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        h = poly_powmod(h, p, g, p)
        common = poly_gcd(g, poly_sub(h, x, p), p)
        k = len(common) - 1
        if k:
            parts.extend([d] * (k // d))
            g = poly_divmod(g, common, p)[0]
            h = poly_mod(h, g, p)
    if len(g) > 1:
        parts.append(len(g) - 1)
    return DegreePartition(parts)


def roots_mod_p(f: PolyFp, seed: int = 0) -> set[int]:
    """All roots of ``f`` in F_p.

    The linear part ``gcd(f, x^p - x)`` is split by random gcds with
    ``(x + s)^((p-1)/2) - 1``; the generator is seeded per call.
    """
    p = f.p
    a = poly_monic(list(f.coeffs), p)
    if not a:
        return set(range(p))
    if len(a) == 1:
        return set()
    if p < 5:
        return {r for r in range(p) if poly_eval(a, r, p) == 0}
    lin = poly_gcd(a, poly_sub(poly_powmod([0, 1], p, a, p), [0, 1], p), p)
    roots: set[int] = set()
    if poly_eval(lin, 0, p) == 0:
        roots.add(0)
        lin = poly_divmod(lin, [0, 1], p)[0]
    rng = random.Random(seed)
    stack = [lin]
    while stack:
        g = stack.pop()
        deg = len(g) - 1
        if deg <= 0:
            continue
        if deg == 1:
            roots.add(-g[0] * pow(g[1], -1, p) % p)
            continue
        while True:
            s = rng.randrange(p)
            w = poly_sub(poly_powmod([s, 1], (p - 1) // 2, g, p), [1], p)
            u = poly_gcd(g, w, p)
            if 0 < len(u) - 1 < deg:
                stack.append(u)
                stack.append(poly_divmod(g, u, p)[0])
                break
    return roots


# --- polynomials over Q -------------------------------------------------------


def _qtrim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _qmod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    r = list(a)
    db = len(b) - 1
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] / b[-1]
        if c:
            for j in range(db + 1):
                r[k - db + j] -= c * b[j]
    return _qtrim(r[:db])


def resultant(f: Sequence, g: Sequence) -> Fraction:
    """Resultant of two rational polynomials by the Euclidean recursion."""
    a = _qtrim([as_rational(c) for c in f])
    b = _qtrim([as_rational(c) for c in g])
    if not a or not b:
        return Fraction(0)
    sign = 1
    acc = Fraction(1)
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return sign * acc * b[0] ** da
        r = _qmod(a, b)
        if not r:
            return Fraction(0)
        if da * db % 2:
            sign = -sign
        acc *= b[-1] ** (da - (len(r) - 1))
        a, b = b, r


def poly_discriminant(f: Sequence) -> Fraction:
    """Discriminant of a rational polynomial given low degree first."""
    a = _qtrim([as_rational(c) for c in f])
    n = len(a) - 1
    if n < 2:
        raise InvalidArgument("discriminant needs degree >= 2")
    da = [i * c for i, c in enumerate(a)][1:]
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(a, da) / a[-1]


def reduce_rational(x: Fraction, p: int) -> int:
    """Image of ``x`` in F_p; raises if the denominator vanishes mod p."""
    x = as_rational(x)
    if x.denominator % p == 0:
        raise InvalidArgument(f"denominator of {x} divisible by {p}")
    return x.numerator * pow(x.denominator, -1, p) % p


def poly_mod_p(coeffs: Sequence, p: int) -> PolyFp:
    """Reduce a rational polynomial (low degree first) to a :class:`PolyFp`."""
    return PolyFp(p, tuple(reduce_rational(c, p) for c in coeffs))
