"""Quintics uniformized by 5-torsion: Brioschi form, the Kiepert curve and
splitting types predicted from Frobenius.

Everything here is exact rational arithmetic.  A quintic reaches the
predictor either as a rescaled Brioschi quintic ``x^5 + A x^3 + B x + C`` or
as a principal quintic ``x^5 + 5a x^2 + 5b x + c`` carried to Brioschi form by
a rational Tschirnhausen map.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .arith import (
    DegreePartition,
    as_rational,
    check_prime,
    distinct_degree_factor,
    legendre,
    poly_discriminant,
    poly_mod_p,
    roots_mod_p,
)
from .classpoly import EndoData, HilbertCache, endo_discriminant
from .curve import CurveQ, reduce_mod, trace_of
from .errors import (
    BadReduction,
    Degenerate,
    ExcludedPrime,
    InvalidArgument,
    Unsupported,
)


def rational_sqrt(x: Fraction) -> Fraction | None:
    x = as_rational(x)
    if x < 0:
        return None
    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


@dataclass(frozen=True)
class BrioschiParam:
    t: Fraction

    def __post_init__(self):
        t = as_rational(self.t)
        object.__setattr__(self, "t", t)
        if t == 0 or t == Fraction(1, 1728):
            raise InvalidArgument(f"Brioschi parameter must avoid 0 and 1/1728, got {t}")


def _param(t) -> BrioschiParam:
    return t if isinstance(t, BrioschiParam) else BrioschiParam(t)


def brioschi_poly(t) -> list[Fraction]:
    """``x^5 - 10t x^3 + 45t^2 x - t^2``, low degree first."""
    t = _param(t).t
    return [-t * t, 45 * t * t, Fraction(0), -10 * t, Fraction(0), Fraction(1)]


def curve_for_t(t) -> CurveQ:
    """``y^2 + xy = x^3 + 36t x + t``, of j-invariant ``1728 - 1/t``."""
    t = _param(t).t
    return CurveQ(1, 0, 0, 36 * t, t)


@dataclass(frozen=True)
class PrincipalQuintic:
    """``x^5 + 5a x^2 + 5b x + c`` with ``5 * disc`` a rational square."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        D = self.discriminant
        if D == 0:
            raise InvalidArgument("principal quintic has zero discriminant")
        if rational_sqrt(5 * D) is None:
            raise InvalidArgument("sqrt(5D) not rational")

    @property
    def coeffs(self) -> list[Fraction]:
        return [self.c, 5 * self.b, 5 * self.a, Fraction(0), Fraction(0), Fraction(1)]

    @property
    def discriminant(self) -> Fraction:
        return poly_discriminant(self.coeffs)


def lambda_quadratic(f: PrincipalQuintic) -> tuple[Fraction, Fraction, Fraction]:
    """``(L, M, N)`` for ``L lam^2 - M lam + N = 0``."""
    a, b, c = f.a, f.b, f.c
    L = a**4 + a * b * c - b**3
    M = 11 * a**3 * b - a * c * c + 2 * b * b * c
    N = 64 * a * a * b * b - 27 * a**3 * c - b * c * c
    return L, M, N


@dataclass(frozen=True)
class TschirnhausenMap:
    """``x -> (lam + mu x) / (x^2/t - 3)`` from roots of ``f_t`` to roots of ``f``."""

    lam: Fraction
    mu: Fraction
    t: Fraction
    j: Fraction

    def __call__(self, x):
        return (self.lam + self.mu * x) / (x * x / self.t - 3)


def tschirnhausen(f: PrincipalQuintic) -> TschirnhausenMap:
    if f.a == 0:
        raise Unsupported("principal quintics with a = 0 are not handled")
    L, M, N = lambda_quadratic(f)
    if L == 0:
        raise Degenerate("degenerate quintic: leading coefficient of the lambda quadratic is 0")
    s = rational_sqrt(M * M - 4 * L * N)
    if s is None:
        raise InvalidArgument("sqrt(5D) not rational")
    roots = sorted({(M - s) / (2 * L), (M + s) / (2 * L)})
    err = None
    for lam in roots:  # smaller root first; the other only if it degenerates
        try:
            return _map_for(f, lam)
        except Degenerate as exc:
            err = exc
    raise err


def _map_for(f: PrincipalQuintic, lam: Fraction) -> TschirnhausenMap:
    a, b, c = f.a, f.b, f.c
    jden = a * a * (lam * a * c - lam * b * b - b * c)
    if jden == 0:
        raise Degenerate("degenerate quintic: j has a zero denominator")
    j = (a * lam * lam - 3 * b * lam - 3 * c) ** 3 / jden
    if j in (0, 1728):
        raise Degenerate(f"degenerate j = {j}")
    t = 1 / (1728 - j)
    mden = lam * lam * a + lam * b + c
    if mden == 0:
        raise Degenerate("degenerate quintic: mu has a zero denominator")
    mu = (j * a * a - 8 * lam**3 * a - 72 * lam * lam * b - 72 * lam * c) / mden
    return TschirnhausenMap(lam, mu, t, j)


def recognize_scaled_brioschi(coeffs) -> tuple[Fraction, Fraction] | None:
    """``(t, c)`` with ``f(x) = c^-5 f_t(c x)`` for monic ``x^5 + A x^3 + B x + C``.

    ``coeffs`` is low degree first; returns None when ``f`` is not of this shape.
    """
    co = [as_rational(x) for x in coeffs]
    if len(co) != 6 or co[5] != 1 or co[4] != 0 or co[2] != 0:
        return None
    C, B, A = co[0], co[1], co[3]
    if A == 0 or C == 0 or B != Fraction(9, 20) * A * A:
        return None
    c = -B / (45 * C)
    t = -A * c * c / 10
    if t == Fraction(1, 1728) or -t * t / c**5 != C:
        return None
    return t, c


# --- splitting types ------------------------------------------------------------


def split_symbols(a_p: int, p: int) -> tuple[int, int]:
    """``(rho, sigma) = ((a^2 - 4p | 5), (p | 5))``."""
    return legendre(a_p * a_p - 4 * p, 5), legendre(p, 5)


def _table(rho: int, sigma: int, a_p: int, b_p: int | None) -> DegreePartition:
    if rho == 0:
        return DegreePartition([1] * 5 if b_p % 5 == 0 else [5])
    if rho == 1:
        return DegreePartition([1, 2, 2] if sigma == 1 else [1, 4])
    if sigma == 1:
        return DegreePartition([1, 1, 3])
    return DegreePartition([1, 1, 1, 2] if a_p % 5 == 0 else [2, 3])


def predict_split(e: EndoData) -> DegreePartition:
    """Splitting type of ``p`` in the quintic field from ``(a_p, b_p)``."""
    if e.p == 5:
        raise ExcludedPrime(5, "p = 5")
    rho, sigma = split_symbols(e.a_p, e.p)
    return _table(rho, sigma, e.a_p, e.b_p)


def predict_split_at(E: CurveQ, p: int, cache: HilbertCache | None = None) -> DegreePartition:
    """:func:`predict_split` that computes ``b_p`` only when ``rho = 0`` needs it."""
    if p == 5:
        raise ExcludedPrime(5, "p = 5")
    try:
        a = trace_of(E, p).a_p
    except BadReduction as exc:
        raise ExcludedPrime(p, exc.reason) from None
    rho, sigma = split_symbols(a, p)
    b = endo_discriminant(E, p, a, cache=cache).b_p if rho == 0 else None
    return _table(rho, sigma, a, b)


def verify_split(coeffs, p: int) -> DegreePartition:
    """Factor degrees of the quintic mod ``p`` (the splitting-type oracle)."""
    check_prime(p)
    try:
        f = poly_mod_p(coeffs, p)
    except InvalidArgument:
        raise ExcludedPrime(p, "coefficient denominator divisible by p") from None
    parts = distinct_degree_factor(f) if f.degree == 5 else None
    if parts is None:
        raise ExcludedPrime(p, "ramified: quintic not squarefree mod p")
    return parts


def quintic_roots_mod_p(coeffs, p: int) -> set[int]:
    return roots_mod_p(poly_mod_p(coeffs, p))


@dataclass(frozen=True)
class QuinticSetup:
    """How a monic quintic was tied to a Brioschi parameter."""

    coeffs: tuple[Fraction, ...]
    t: Fraction
    kind: str  # "brioschi" or "principal"
    scale: Fraction | None = None
    tmap: TschirnhausenMap | None = None

    @property
    def curve(self) -> CurveQ:
        return curve_for_t(self.t)

    @property
    def discriminant(self) -> Fraction:
        return poly_discriminant(list(self.coeffs))


def resolve_quintic(coeffs) -> QuinticSetup:
    """Find ``t`` for a monic quintic (low degree first) with zero ``x^4`` term."""
    co = tuple(as_rational(x) for x in coeffs)
    if len(co) != 6 or co[5] != 1:
        raise InvalidArgument("expected a monic quintic")
    if co[4] != 0:
        raise Unsupported("the x^4 coefficient must be zero")
    D = poly_discriminant(list(co))
    if D == 0:
        raise InvalidArgument("quintic has zero discriminant")
    if rational_sqrt(5 * D) is None:
        raise InvalidArgument("sqrt(5D) not rational")
    rec = recognize_scaled_brioschi(co)
    if rec is not None:
        return QuinticSetup(co, rec[0], "brioschi", scale=rec[1])
    if co[3] == 0:
        f = PrincipalQuintic(co[2] / 5, co[1] / 5, co[0])
        m = tschirnhausen(f)
        return QuinticSetup(co, m.t, "principal", tmap=m)
    raise Unsupported("quintic is neither a scaled Brioschi quintic nor principal")


def parse_quintic(text: str) -> tuple[Fraction, ...]:
    """``"c4,c3,c2,c1,c0"`` for ``x^5 + c4 x^4 + ... + c0``, returned low degree first."""
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != 5 or not all(parts):
        raise InvalidArgument(f"quintic must be 'c4,c3,c2,c1,c0', got {text!r}")
    high = [as_rational(s) for s in parts]
    return tuple(reversed(high)) + (Fraction(1),)


def check_prime_for_quintic(setup: QuinticSetup, E: CurveQ, p: int) -> None:
    """Raise :class:`ExcludedPrime` unless ``p`` meets the predictor's hypotheses."""
    if p == 5:
        raise ExcludedPrime(p, "p = 5")
    D = setup.discriminant
    if D.numerator % p == 0 or D.denominator % p == 0:
        raise ExcludedPrime(p, "p divides disc(f)")
    if any(c.denominator % p == 0 for c in setup.coeffs):
        raise ExcludedPrime(p, "coefficient denominator divisible by p")
    try:
        reduce_mod(E, p)
    except BadReduction as exc:
        raise ExcludedPrime(p, exc.reason) from None
