"""The integral Frobenius matrix, its reductions mod q and what they predict.

A Frobenius matrix is built from ``(a_p, Delta_p, b_p)`` alone.  Reduced mod q
it is compared against brute-force facts about ``E mod p``: the factor degrees
of the q-division polynomial and, for density sweeps, the conjugacy class in
``GL_2(Z/q)``.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd

from sympy import primerange

from .arith import DegreePartition, check_prime, distinct_degree_factor, reduce_rational
from .classpoly import EndoData, HilbertCache, candidate_discriminants, endo_discriminant, hilbert_poly
from .curve import CurveQ, division_poly, reduce_mod, trace_of, two_division_poly
from .errors import (
    BadReduction,
    ExcludedPrime,
    FrobDivError,
    InconsistentInvariants,
    InvalidArgument,
    Unsupported,
)

log = logging.getLogger(__name__)

CLASS_TABLE_MODULI = (2, 3, 5, 7)


@dataclass(frozen=True)
class FrobMatrix:
    """Integral 2x2 matrix ``[[m00, m01], [m10, m11]]`` of Frobenius at ``p``."""

    p: int
    m00: int
    m01: int
    m10: int
    m11: int

    @property
    def det(self) -> int:
        return self.m00 * self.m11 - self.m01 * self.m10

    @property
    def trace(self) -> int:
        return self.m00 + self.m11

    def rows(self) -> list[list[int]]:
        return [[self.m00, self.m01], [self.m10, self.m11]]


def frob_matrix(e: EndoData) -> FrobMatrix:
    """``[[(a + b d)/2, b], [b (D - d)/4, (a - b d)/2]]`` with ``d = D mod 4``."""
    a, b, D, d = e.a_p, e.b_p, e.disc, e.delta
    if (a + b * d) % 2 or (D - d) % 4:
        raise InconsistentInvariants(f"parity violation in Frobenius matrix at p={e.p}")
    M = FrobMatrix(e.p, (a + b * d) // 2, b, b * (D - d) // 4, (a - b * d) // 2)
    if M.det != e.p or M.trace != a:
        raise InconsistentInvariants(f"Frobenius matrix at p={e.p} has det {M.det}")
    return M


@dataclass(frozen=True)
class MatModQ:
    """A 2x2 matrix over ``Z/q`` stored row-major as residues in ``[0, q)``."""

    q: int
    entries: tuple[int, int, int, int]

    def __post_init__(self):
        if self.q < 2:
            raise InvalidArgument("modulus must be >= 2")
        object.__setattr__(self, "entries", tuple(x % self.q for x in self.entries))

    @classmethod
    def scalar(cls, s: int, q: int) -> "MatModQ":
        return cls(q, (s, 0, 0, s))

    @property
    def det(self) -> int:
        a, b, c, d = self.entries
        return (a * d - b * c) % self.q

    @property
    def trace(self) -> int:
        a, _, _, d = self.entries
        return (a + d) % self.q

    def __mul__(self, other: "MatModQ") -> "MatModQ":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return MatModQ(self.q, (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h))

    def apply(self, v: tuple[int, int]) -> tuple[int, int]:
        a, b, c, d = self.entries
        x, y = v
        return ((a * x + b * y) % self.q, (c * x + d * y) % self.q)

    def is_scalar(self) -> bool:
        a, b, c, d = self.entries
        return b == 0 and c == 0 and a == d

    def rows(self) -> list[list[int]]:
        a, b, c, d = self.entries
        return [[a, b], [c, d]]


def reduce_mod_q(M: FrobMatrix, q: int) -> MatModQ:
    if q < 2:
        raise InvalidArgument("q must be >= 2")
    if M.p % q == 0 or q % M.p == 0:
        raise ExcludedPrime(M.p, f"p shares a factor with q={q}")
    return MatModQ(q, (M.m00, M.m01, M.m10, M.m11))


def splits_completely_Lq(e: EndoData, q: int) -> bool:
    """Complete splitting in the full q-division field: ``a = 2, b = 0 mod q``."""
    if q < 3 or q % 2 == 0:
        raise Unsupported("the division-field criterion needs odd q")
    if e.p % q == 0:
        raise ExcludedPrime(e.p, f"p divides q={q}")
    return e.a_p % q == 2 % q and e.b_p % q == 0


def splits_completely_Lq_plus(M: MatModQ, disc: int | None = None, j=None) -> bool:
    """Complete splitting in the x-coordinate field: ``M = +-Id mod q``.

    As an exact criterion this needs ``-disc > 4``; curves with ``j`` in
    ``{0, 1728}`` are rejected because their Weber function is not ``x``.
    """
    if j is not None and j in (0, 1728):
        raise Unsupported(f"j = {j}: the x-coordinate is not a Weber function here")
    if disc is not None and -disc <= 4:
        raise Unsupported(f"criterion needs -disc > 4, got disc = {disc}")
    q = M.q
    return M == MatModQ.scalar(1, q) or M == MatModQ.scalar(-1, q)


def cm_split_criterion(e: EndoData, q: int) -> bool:
    """``#E(F_p) = 0 mod q^2`` and ``p = 1 mod q`` (a sufficient condition on CM curves)."""
    if q % 2 == 0:
        raise Unsupported("the CM criterion is stated for odd q")
    return (e.p + 1 - e.a_p) % (q * q) == 0 and e.p % q == 1


# --- GL_2(Z/q) ---------------------------------------------------------------


@dataclass(frozen=True)
class ConjClassTable:
    q: int
    classes: tuple[tuple[MatModQ, int], ...]
    order: int
    index: dict = field(repr=False, compare=False)

    def class_of(self, M: MatModQ) -> int:
        if M.q != self.q:
            raise InvalidArgument(f"matrix is mod {M.q}, table is mod {self.q}")
        try:
            return self.index[M.entries]
        except KeyError:
            raise InvalidArgument(f"{M.rows()} is not invertible mod {self.q}") from None

    def fraction(self, i: int) -> float:
        return self.classes[i][1] / self.order


def _inverse(M: MatModQ) -> MatModQ:
    a, b, c, d = M.entries
    inv = pow(M.det, -1, M.q)
    return MatModQ(M.q, (d * inv, -b * inv, -c * inv, a * inv))


@lru_cache(maxsize=None)
def gl2_classes(q: int) -> ConjClassTable:
    """Conjugacy classes of ``GL_2(Z/q)`` by brute force, for ``q`` in 2, 3, 5, 7."""
    if q not in CLASS_TABLE_MODULI:
        raise Unsupported(f"class tables are built for q in {CLASS_TABLE_MODULI}, not {q}")
    group = [MatModQ(q, t) for t in product(range(q), repeat=4)]
    group = [g for g in group if g.det != 0]
    pairs = [(g, _inverse(g)) for g in group]
    index: dict = {}
    classes = []
    for g in group:
        if g.entries in index:
            continue
        k = len(classes)
        orbit = {(h * g * hinv).entries for h, hinv in pairs}
        for x in orbit:
            index[x] = k
        classes.append((g, len(orbit)))
    return ConjClassTable(q, tuple(classes), len(group), index)


def torsion_orbit_degrees(M: MatModQ) -> DegreePartition:
    """Orbit sizes of ``<M>`` on nonzero vectors of ``(Z/q)^2`` modulo ``+-1``.

    These are the x-coordinate orbits of Frobenius on ``E[q]``; for ``q = 2``
    the sign is trivial and the orbits are those of the 2-torsion points.
    """
    q = M.q
    if gcd(M.det, q) != 1:
        raise InvalidArgument("matrix must be invertible mod q")

    def canon(v):
        w = ((-v[0]) % q, (-v[1]) % q)
        return min(v, w)

    seen = set()
    parts = []
    for v in product(range(q), repeat=2):
        if v == (0, 0):
            continue
        c = canon(v)
        if c in seen:
            continue
        size = 0
        w = c
        while True:
            seen.add(w)
            size += 1
            w = canon(M.apply(w))
            if w == c:
                break
        parts.append(size)
    return DegreePartition(parts)


def division_ddf(E: CurveQ, p: int, q: int) -> DegreePartition | None:
    """Factor degrees of the q-division polynomial of ``E mod p`` (2-division cubic for q = 2)."""
    Ep = reduce_mod(E, p)
    f = two_division_poly(Ep) if q == 2 else division_poly(Ep, q)
    return distinct_degree_factor(f)


# --- per-prime reports and sweeps ---------------------------------------------


def endo_data(E: CurveQ, p: int, cache: HilbertCache | None = None) -> EndoData:
    return endo_discriminant(E, p, trace_of(E, p).a_p, cache=cache)


def frob_report(E: CurveQ, p: int, q: int, cache: HilbertCache | None = None) -> dict:
    """One report row: invariants, matrix, its class mod q and the orbit oracle."""
    if p % q == 0:
        raise ExcludedPrime(p, f"p divides q={q}")
    e = endo_data(E, p, cache)
    M = frob_matrix(e)
    Mq = reduce_mod_q(M, q)
    orbits = torsion_orbit_degrees(Mq)
    ddf = division_ddf(E, p, q)
    cls = gl2_classes(q).class_of(Mq) if q in CLASS_TABLE_MODULI else None
    return {
        "p": p,
        "ap": e.a_p,
        "delta": e.disc,
        "bp": e.b_p,
        "matrix": M.rows(),
        "matrix_mod_q": Mq.rows(),
        "class_index": cls,
        "orbit_degrees": list(orbits),
        "ddf_degrees": None if ddf is None else list(ddf),
        "agree": ddf is not None and tuple(orbits) == tuple(ddf),
    }


@dataclass
class DensityResult:
    q: int
    X: int
    table: ConjClassTable
    counts: Counter
    total: int
    skipped: list = field(default_factory=list)

    def expected(self, i: int) -> float:
        return self.table.fraction(i) * self.total

    def rows(self) -> list[dict]:
        out = []
        for i, (rep, size) in enumerate(self.table.classes):
            exp = self.expected(i)
            got = self.counts.get(i, 0)
            out.append({
                "class_index": i,
                "representative": rep.rows(),
                "size": size,
                "count": got,
                "expected": exp,
                "rel_dev": (got - exp) / exp if exp else None,
            })
        return out


def frob_class_mod_q(E: CurveQ, p: int, q: int, cache: HilbertCache | None = None) -> MatModQ:
    """A matrix in the same ``GL_2(Z/q)`` class as ``[p] mod q``.

    ``[p] = s*Id + b*N`` with ``N`` never scalar, so ``[p] mod q`` is scalar
    iff ``q | b``; otherwise its class is fixed by ``x^2 - a x + p`` mod q.
    Only candidates ``(D, c)`` with ``q | c`` therefore need a class
    polynomial test, and those have ``|D| <= 4p/q^2``.
    """
    a = trace_of(E, p).a_p
    if a == 0 and p % 4 == 3 or p < 5:
        return reduce_mod_q(frob_matrix(endo_discriminant(E, p, a, cache=cache)), q)
    cands = candidate_discriminants(a, p)
    jE = reduce_rational(E.j, p)
    hit = None
    for D, c in cands:
        if c % q == 0 and hilbert_poly(D, cache).evaluate_mod(jE, p) == 0:
            hit = (D, c)
            break
    if hit is None:
        # every remaining candidate has q prime to b and gives the same class
        hit = min((t for t in cands if t[1] % q), key=lambda t: t[1])
    return reduce_mod_q(frob_matrix(EndoData(p, a, hit[0], hit[1], verified=False)), q)


def density_count(E: CurveQ, q: int, X: int, cache: HilbertCache | None = None,
                  start: int = 2, full: bool = False) -> DensityResult:
    """Tally the class of ``[p] mod q`` over good primes ``start <= p <= X``, ``p`` prime to q.

    By default the class is found with :func:`frob_class_mod_q`; ``full``
    computes the complete invariants at every prime instead.
    """
    table = gl2_classes(q)
    counts: Counter = Counter()
    skipped = []
    total = 0
    for p in primerange(start, X + 1):
        if p % q == 0:
            continue
        try:
            reduce_mod(E, p)
        except BadReduction:
            continue
        try:
            if full:
                Mq = reduce_mod_q(frob_matrix(endo_data(E, p, cache)), q)
            else:
                Mq = frob_class_mod_q(E, p, q, cache)
        except FrobDivError as exc:
            log.warning("density sweep: skipping p=%d (%s)", p, exc)
            skipped.append(p)
            continue
        counts[table.class_of(Mq)] += 1
        total += 1
    return DensityResult(q, X, table, counts, total, skipped)


def j_mod_p(E: CurveQ, p: int) -> int:
    check_prime(p)
    return reduce_rational(E.j, p)
