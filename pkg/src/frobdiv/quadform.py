"""Imaginary quadratic discriminants, reduced forms and representation search."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .errors import InconsistentInvariants, InvalidDiscriminant


@dataclass(frozen=True)
class Discriminant:
    value: int

    def __post_init__(self):
        v = self.value
        if not isinstance(v, int) or v >= 0 or v % 4 not in (0, 1):
            raise InvalidDiscriminant(f"{v!r} is not a negative discriminant")

    @property
    def delta(self) -> int:
        """0 or 1 according to ``value mod 4``."""
        return self.value % 4

    def __int__(self):
        return self.value


def as_discriminant(d) -> Discriminant:
    return d if isinstance(d, Discriminant) else Discriminant(int(d))


def is_discriminant(d: int) -> bool:
    return d < 0 and d % 4 in (0, 1)


@dataclass(frozen=True, order=True)
class QuadForm:
    A: int
    B: int
    C: int

    @property
    def discriminant(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def __call__(self, x: int, y: int) -> int:
        return self.A * x * x + self.B * x * y + self.C * y * y

    def is_reduced(self) -> bool:
        A, B, C = self.A, self.B, self.C
        if not (A > 0 and abs(B) <= A <= C):
            return False
        if (abs(B) == A or A == C) and B < 0:
            return False
        return True

    def is_primitive(self) -> bool:
        return gcd(gcd(self.A, self.B), self.C) == 1

    def __str__(self):
        return f"({self.A},{self.B},{self.C})"


@dataclass(frozen=True)
class ClassGroup:
    disc: Discriminant
    forms: tuple[QuadForm, ...]

    @property
    def h(self) -> int:
        return len(self.forms)


def reduced_forms(disc) -> ClassGroup:
    """All reduced primitive forms of discriminant ``disc`` (principal form first)."""
    d = as_discriminant(disc)
    D = d.value
    forms = []
    for A in range(1, isqrt(-D // 3) + 1):
        for B in range(-A + 1, A + 1):
            if (B - D) % 2:
                continue
            num = B * B - D
            if num % (4 * A):
                continue
            C = num // (4 * A)
            if C < A or (A == C and B < 0):
                continue
            if gcd(gcd(A, B), C) != 1:
                continue
            forms.append(QuadForm(A, B, C))
    return ClassGroup(d, tuple(forms))


def class_number(disc) -> int:
    return reduced_forms(disc).h


def principal_form(disc) -> QuadForm:
    d = as_discriminant(disc)
    return QuadForm(1, d.delta, (d.delta - d.value) // 4)


def represent_trace(disc, p: int, a_abs: int) -> int:
    """The unique ``b >= 0`` with ``4p = a^2 - disc * b^2``."""
    D = as_discriminant(disc).value
    num = a_abs * a_abs - 4 * p
    if num > 0 or num % D:
        raise InconsistentInvariants(f"{D} does not divide a^2-4p = {num}")
    b2 = num // D
    b = isqrt(b2)
    if b * b != b2:
        raise InconsistentInvariants(f"(a^2-4p)/{D} = {b2} is not a square")
    return b


@dataclass(frozen=True)
class Representation:
    x: int
    y: int

    @property
    def primitive(self) -> bool:
        return gcd(self.x, self.y) == 1


def represent_principal(disc, n: int) -> list[Representation]:
    """Every ``(x, y)`` with ``n = Q(x, y)`` for the principal form of ``disc``."""
    d = as_discriminant(disc)
    D, delta = d.value, d.delta
    out = []
    # 4n = (2x + delta*y)^2 - D y^2
    ymax = isqrt(4 * n // -D)
    for y in range(-ymax, ymax + 1):
        rem = 4 * n + D * y * y
        if rem < 0:
            continue
        s = isqrt(rem)
        if s * s != rem:
            continue
        for u in {s, -s}:
            if (u - delta * y) % 2 == 0:
                out.append(Representation((u - delta * y) // 2, y))
    return sorted(out, key=lambda r: (r.y, r.x))


def trace_to_principal(a: int, b: int, disc) -> Representation:
    """The change of variables ``x = (a - b*delta)/2, y = b``."""
    d = as_discriminant(disc)
    num = a - b * d.delta
    if num % 2:
        raise InconsistentInvariants("a - b*delta must be even")
    return Representation(num // 2, b)
