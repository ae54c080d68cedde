"""Singular moduli, Hilbert class polynomials and the endomorphism discriminant.

Complex values are :mod:`mpmath` numbers at an explicit decimal precision.
The Hilbert polynomial is assembled in fixed point over Python integers and
rounded to exact integer coefficients, after which every use is an exact
congruence mod p.
"""

from __future__ import annotations

import logging
import math
import os
import tempfile
import threading
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath
from gmpy2 import mpq, mpz
from mpmath.libmp import to_fixed

from .arith import (
    check_prime,
    divisors,
    poly_eval,
    reduce_rational,
    roots_mod_p,
    squarefree_decompose,
)
from .curve import CurveQ, reduce_mod, trace_of, two_division_poly
from .errors import (
    BadReduction,
    InconsistentInvariants,
    InvalidArgument,
    PrecisionFailure,
    Unsupported,
)
from .quadform import (
    ClassGroup,
    Discriminant,
    QuadForm,
    as_discriminant,
    is_discriminant,
    reduced_forms,
)

log = logging.getLogger(__name__)

MIN_DIGITS = 20
GUARD_DIGITS = 20
ROUNDING_TOLERANCE = 1e-3
MAX_RETRIES = 3
DEFAULT_MAX_ABS_DISC = 400_000
# 1 + |j(tau)| < 4 exp(2 pi Im tau) on the fundamental domain
COEFF_HEIGHT = math.log(4)


def tau_of(form: QuadForm, digits: int = 50) -> mpmath.mpc:
    """``(-B + i sqrt|D|) / 2A`` for a reduced form."""
    D = form.discriminant
    with mpmath.workdps(digits):
        return mpmath.mpc(-form.B, mpmath.sqrt(-D)) / (2 * form.A)


def im_tau(form: QuadForm) -> float:
    return math.sqrt(-form.discriminant) / (2 * form.A)


def _theta_sums(nome, eps):
    # S = sum_{n>=0} nome^(n(n+1)),  T3/T4 = 1 + 2 sum_{n>=1} (+-1)^n nome^(n^2)
    S = mpmath.mpc(1)
    T3 = mpmath.mpc(1)
    T4 = mpmath.mpc(1)
    nome2 = nome * nome
    # nome^(n^2) and nome^(n(n+1)) advance by nome^(2n+1) and nome^(2n+2)
    sq = mpmath.mpc(1)
    step_sq = nome
    tri = mpmath.mpc(1)
    step_tri = nome2
    n = 0
    while True:
        n += 1
        sq *= step_sq
        step_sq *= nome2
        tri *= step_tri
        step_tri *= nome2
        T3 += 2 * sq
        T4 += 2 * sq if n % 2 == 0 else -2 * sq
        S += tri
        if abs(sq) < eps:
            return S, T3, T4


def _pow8(z):
    z = z * z
    z = z * z
    return z * z


def j_tau(tau, digits: int = 50) -> mpmath.mpc:
    """Klein's ``j(tau)`` to ``digits`` significant digits.

    ``E4 = (th2^8 + th3^8 + th4^8)/2`` and ``E4^3 - E6^2 = 1728 eta^24`` with
    ``eta^24 = (th2 th3 th4 / 2)^8``; both series are sparse in the nome.
    """
    if digits < MIN_DIGITS:
        raise PrecisionFailure(f"j_tau needs at least {MIN_DIGITS} digits, got {digits}")
    with mpmath.workdps(digits + 10):
        tau = mpmath.mpc(tau)
        if tau.imag < mpmath.sqrt(3) / 2 - mpmath.mpf("1e-12"):
            raise InvalidArgument("tau must satisfy Im(tau) >= sqrt(3)/2")
        nome = mpmath.expjpi(tau)
        S, T3, T4 = _theta_sums(nome, mpmath.mpf(10) ** (-(digits + 10)))
        nome2 = nome * nome
        S8, T38, T48 = _pow8(S), _pow8(T3), _pow8(T4)
        N = 256 * nome2 * S8 + T38 + T48
        j = N * N * N / (8 * S8 * T38 * T48) * mpmath.expjpi(-2 * tau)
    return +j


def eisenstein_j(tau, digits: int = 50) -> mpmath.mpc:
    """``1728 E4^3 / (E4^3 - E6^2)`` from the plain divisor-sum q-series.

    Slow reference path; the working precision absorbs the cancellation in
    the denominator.
    """
    with mpmath.workdps(digits + 10):
        tau = mpmath.mpc(tau)
        extra = int(2 * math.pi * float(tau.imag) / math.log(10)) + 10
    with mpmath.workdps(digits + extra):
        tau = mpmath.mpc(tau)
        q = mpmath.expjpi(2 * tau)
        eps = mpmath.mpf(10) ** (-(digits + extra))
        e4 = mpmath.mpc(0)
        e6 = mpmath.mpc(0)
        qn = mpmath.mpc(1)
        n = 0
        while True:
            n += 1
            qn *= q
            s3 = sum(d**3 for d in range(1, n + 1) if n % d == 0)
            s5 = sum(d**5 for d in range(1, n + 1) if n % d == 0)
            e4 += s3 * qn
            e6 += s5 * qn
            if abs(qn) * n**6 < eps:
                break
        E4 = 1 + 240 * e4
        E6 = 1 - 504 * e6
        j = 1728 * E4**3 / (E4**3 - E6**2)
    with mpmath.workdps(digits):
        return +j


def precision_estimate(jE_height: float, class_group: ClassGroup) -> int:
    """Decimal digits needed: ``sum (height + 2 pi Im tau_i) / log 10`` plus guard."""
    total = sum(jE_height + 2 * math.pi * im_tau(f) for f in class_group.forms)
    return math.ceil(total / math.log(10)) + GUARD_DIGITS


def j_height(j: Fraction) -> float:
    """``log max(|num|, |den|)`` of a rational j-invariant (0 for j = 0)."""
    j = Fraction(j)
    return math.log(max(abs(j.numerator), j.denominator, 1))


@dataclass(frozen=True)
class HilbertPoly:
    """Monic integer polynomial; ``coeffs`` run from the constant term up."""

    disc: Discriminant
    coeffs: tuple[int, ...]
    rounding_error: float = 0.0
    digits: int = 0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate_mod(self, x: int, p: int) -> int:
        return poly_eval(self.coeffs, x % p, p)

    def to_text(self) -> str:
        top_down = " ".join(str(c) for c in reversed(self.coeffs))
        return f"{self.disc.value} {self.degree} {top_down}"

    @classmethod
    def from_text(cls, text: str) -> "HilbertPoly":
        fields = text.split()
        D, h = int(fields[0]), int(fields[1])
        top_down = [int(c) for c in fields[2:]]
        if len(top_down) != h + 1 or top_down[0] != 1:
            raise InvalidArgument(f"malformed Hilbert polynomial record for {D}")
        return cls(Discriminant(D), tuple(reversed(top_down)))


def _to_fixed(x, bits: int):
    return mpz(to_fixed(mpmath.mpf(x)._mpf_, bits))


def _cmul(a, b, bits):
    # (a0 + i a1)(b0 + i b1) with three multiplications
    k1 = b[0] * (a[0] + a[1])
    k2 = a[0] * (b[1] - b[0])
    k3 = a[1] * (b[0] + b[1])
    return (k1 - k3) >> bits, (k1 + k2) >> bits


def _csq(a, bits):
    re = (a[0] + a[1]) * (a[0] - a[1])
    return re >> bits, (a[0] * a[1]) >> (bits - 1)


def _cdiv(a, b, bits):
    den = b[0] * b[0] + b[1] * b[1]
    re = ((a[0] * b[0] + a[1] * b[1]) << bits) // den
    im = ((a[1] * b[0] - a[0] * b[1]) << bits) // den
    return re, im


def _j_fixed(form: QuadForm, bits: int):
    """``j`` at the form's tau as fixed-point ``(re, im)`` scaled by ``2**bits``.

    Only the th3/th4 series are summed.  With ``t_n = nome^(n^2 - 1)``,
    th3 - th4 = 4 nome sum_{n odd} t_n, so th2^4 = th3^4 - th4^4 factors as
    (th3 - th4)(th3 + th4)(th3^2 + th4^2) and the ``nome^2`` in th2^8 is
    divided out exactly instead of being lost to cancellation.
    """
    wbits = bits + 48
    with mpmath.workprec(wbits + 32):
        r = mpmath.exp(-mpmath.pi * mpmath.sqrt(-form.discriminant) / (2 * form.A))
        rot = mpmath.expjpi(mpmath.mpf(-form.B) / (2 * form.A))
        nome = (_to_fixed(r * rot.real, wbits), _to_fixed(r * rot.imag, wbits))
        inv = mpmath.conj(rot) ** 2 / (r * r)
        inv_nome2 = (_to_fixed(inv.real, wbits), _to_fixed(inv.imag, wbits))
    one = mpz(1) << wbits
    zero = mpz(0)
    nome2 = _csq(nome, wbits)
    even = [zero, zero]
    odd = [one, zero]  # t_1 = 1
    t, step = (one, zero), _cmul(nome2, nome, wbits)  # step = nome^(2n+1)
    n = 1
    while t[0] or t[1]:
        t = _cmul(t, step, wbits)
        step = _cmul(step, nome2, wbits)
        n += 1
        acc = even if n % 2 == 0 else odd
        acc[0] += t[0]
        acc[1] += t[1]
    # th3 = 1 + 2 nome (E + O), th4 = 1 + 2 nome (E - O)
    e2 = _cmul(nome, (2 * (even[0] + odd[0]), 2 * (even[1] + odd[1])), wbits)
    f2 = _cmul(nome, (2 * (even[0] - odd[0]), 2 * (even[1] - odd[1])), wbits)
    T3 = (one + e2[0], e2[1])
    T4 = (one + f2[0], f2[1])
    T3_2, T4_2 = _csq(T3, wbits), _csq(T4, wbits)
    T3_4, T4_4 = _csq(T3_2, wbits), _csq(T4_2, wbits)
    T3_8, T4_8 = _csq(T3_4, wbits), _csq(T4_4, wbits)
    # th2^4 / nome = 4 O (th3 + th4)(th3^2 + th4^2)
    g = _cmul(odd, (T3[0] + T4[0], T3[1] + T4[1]), wbits)
    g = _cmul(g, (T3_2[0] + T4_2[0], T3_2[1] + T4_2[1]), wbits)
    g = (4 * g[0], 4 * g[1])
    T2_8n = _csq(g, wbits)  # th2^8 / nome^2
    T2_8 = _cmul(T2_8n, nome2, wbits)
    N = (T2_8[0] + T3_8[0] + T4_8[0], T2_8[1] + T3_8[1] + T4_8[1])
    N3 = _cmul(_csq(N, wbits), N, wbits)
    den = _cmul(_cmul(T2_8n, T3_8, wbits), T4_8, wbits)
    u = _cdiv(N3, den, wbits)
    j = _cmul((32 * u[0], 32 * u[1]), inv_nome2, wbits)
    return j[0] >> (wbits - bits), j[1] >> (wbits - bits)


def _kronecker_mul(P, Q, bits):
    """Fixed-point polynomial product ``(P * Q) >> bits`` via one big multiply."""
    mp_ = max(abs(c) for c in P).bit_length()
    mq = max(abs(c) for c in Q).bit_length()
    K = mp_ + mq + min(len(P), len(Q)).bit_length() + 2
    K = (K + 7) // 8 * 8
    nb = K // 8
    half = 1 << (K - 1)

    def encode(coeffs):
        raw = b"".join(int(c + half).to_bytes(nb, "little") for c in coeffs)
        bias = (b"\x00" * (nb - 1) + b"\x80") * len(coeffs)
        return mpz(int.from_bytes(raw, "little") - int.from_bytes(bias, "little"))

    prod = encode(P) * encode(Q)
    n = len(P) + len(Q) - 1
    bias = int.from_bytes((b"\x00" * (nb - 1) + b"\x80") * n, "little")
    raw = int(prod + bias).to_bytes(n * nb, "little")
    out = []
    for i in range(n):
        c = int.from_bytes(raw[i * nb:(i + 1) * nb], "little") - half
        out.append(mpz(c) >> bits)
    return out


def _assemble(cg: ClassGroup, digits: int) -> tuple[tuple[int, ...], float]:
    bits = math.ceil(digits * math.log2(10)) + 16
    one = mpz(1) << bits
    factors = []
    for f in cg.forms:
        conj_pair = f.B != 0 and abs(f.B) != f.A and f.A != f.C
        if conj_pair and f.B < 0:
            continue  # handled together with (A, -B, C)
        jr, ji = _j_fixed(f, bits)
        if conj_pair:
            factors.append([(jr * jr + ji * ji) >> bits, -2 * jr, one])
        else:
            factors.append([-jr, one])
    while len(factors) > 1:
        nxt = [_kronecker_mul(factors[i], factors[i + 1], bits)
               for i in range(0, len(factors) - 1, 2)]
        if len(factors) % 2:
            nxt.append(factors[-1])
        factors = nxt
    coeffs = []
    worst = 0.0
    half = 1 << (bits - 1)
    for c in factors[0]:
        r = (c + half) >> bits
        coeffs.append(int(r))
        worst = max(worst, float(mpq(abs(c - (r << bits)), one)))
    return tuple(coeffs), worst


def compute_hilbert_poly(disc, digits: int | None = None) -> HilbertPoly:
    """Hilbert class polynomial of ``disc``, retrying at doubled precision."""
    d = as_discriminant(disc)
    cg = reduced_forms(d)
    if digits is None:
        digits = precision_estimate(COEFF_HEIGHT, cg)
    digits = max(digits, MIN_DIGITS)
    for _ in range(MAX_RETRIES + 1):
        coeffs, err = _assemble(cg, digits)
        if err < ROUNDING_TOLERANCE and coeffs[-1] == 1:
            return HilbertPoly(d, coeffs, err, digits)
        log.info("H_%d: rounding error %.3g at %d digits, retrying", d.value, err, digits)
        digits *= 2
    raise PrecisionFailure(f"H_{d.value} did not round to integers (error {err:.3g})")


class HilbertCache:
    """Thread-safe LRU store of Hilbert polynomials, optionally backed by a
    directory holding one ``<|D|>.txt`` file per discriminant."""

    def __init__(self, directory=None, maxsize: int = 512,
                 max_abs_disc: int = DEFAULT_MAX_ABS_DISC, digits: int | None = None):
        self.directory = Path(directory) if directory else None
        self.digits = digits  # starting precision override for new polynomials
        self.maxsize = maxsize
        self.max_abs_disc = max_abs_disc
        self._mem: OrderedDict[int, HilbertPoly] = OrderedDict()
        self._lock = threading.Lock()
        if self.directory:
            self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, D: int) -> Path:
        return self.directory / f"{-D}.txt"

    def get(self, disc) -> HilbertPoly:
        D = as_discriminant(disc).value
        if -D > self.max_abs_disc:
            raise Unsupported(f"|D| = {-D} exceeds the configured bound {self.max_abs_disc}")
        with self._lock:
            hit = self._mem.get(D)
            if hit is not None:
                self._mem.move_to_end(D)
                return hit
        H = self._load(D)
        if H is None:
            H = compute_hilbert_poly(D, self.digits)
            self._store(H)
        with self._lock:
            self._mem[D] = H
            while len(self._mem) > self.maxsize:
                self._mem.popitem(last=False)
        return H

    def _load(self, D: int) -> HilbertPoly | None:
        if not self.directory:
            return None
        path = self._path(D)
        if not path.exists():
            return None
        H = HilbertPoly.from_text(path.read_text())
        if H.disc.value != D:
            return None
        return H

    def _store(self, H: HilbertPoly) -> None:
        if not self.directory:
            return
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(H.to_text() + "\n")
        os.replace(tmp, self._path(H.disc.value))


_default_cache: HilbertCache | None = None


def default_cache() -> HilbertCache:
    global _default_cache
    if _default_cache is None:
        _default_cache = HilbertCache(os.environ.get("FROBDIV_CACHE") or None)
    return _default_cache


def set_default_cache(cache: HilbertCache | None) -> HilbertCache | None:
    """Install ``cache`` as the process default and return the previous one."""
    global _default_cache
    previous, _default_cache = _default_cache, cache
    return previous


def hilbert_poly(disc, cache: HilbertCache | None = None) -> HilbertPoly:
    return (cache or default_cache()).get(disc)


# --- endomorphism discriminant --------------------------------------------------


def conductor(D: int) -> int:
    """Largest f with D/f^2 a discriminant."""
    fund, m = squarefree_decompose(D)
    if fund % 4 != 1:
        fund *= 4
        m //= 2
    return m


@dataclass(frozen=True)
class EndoData:
    """Per-prime invariants with ``4p = a^2 - disc * b^2``.

    ``verified`` is False when the discriminant was the only remaining
    candidate and its class polynomial was not evaluated.
    """

    p: int
    a_p: int
    disc: int
    b_p: int
    verified: bool = True

    def __post_init__(self):
        if 4 * self.p != self.a_p**2 - self.disc * self.b_p**2:
            raise InconsistentInvariants(f"4p != a^2 - D b^2 at p={self.p}")
        if self.disc != 1 and not is_discriminant(self.disc):
            raise InconsistentInvariants(f"{self.disc} is not a discriminant")

    @property
    def delta(self) -> int:
        return self.disc % 4

    @property
    def ordinary(self) -> bool:
        return self.a_p != 0


def candidate_discriminants(a_p: int, p: int) -> list[tuple[int, int]]:
    """``(D_c, c)`` with ``a^2 - 4p = D_c c^2`` and ``D_c`` a discriminant,
    ordered by increasing ``|D_c|``."""
    n = a_p * a_p - 4 * p
    if n >= 0:
        raise InconsistentInvariants(f"a^2 - 4p = {n} is not negative (Hasse bound)")
    _, m = squarefree_decompose(n)
    out = []
    for c in divisors(m):
        Dc = n // (c * c)
        if Dc % 4 in (0, 1):
            out.append((Dc, c))
    return sorted(out, key=lambda t: -t[0])


def endo_discriminant(E: CurveQ, p: int, a_p: int | None = None, *,
                      cache: HilbertCache | None = None,
                      exhaustive: bool = False) -> EndoData:
    """Discriminant of the order generated by Frobenius' centraliser at ``p``.

    Candidates are tested in increasing ``|D|`` by ``H_D(j(E)) == 0 mod p``.
    Unless ``exhaustive``, the last remaining candidate is accepted without
    evaluating its (largest) class polynomial.  Supersingular primes
    ``p = 3 mod 4`` are decided by the 2-torsion of ``E mod p`` instead.
    """
    check_prime(p)
    Ep = reduce_mod(E, p)
    if a_p is None:
        a_p = trace_of(E, p).a_p
    try:
        jE = reduce_rational(E.j, p)
    except InvalidArgument:
        raise BadReduction(p, "j(E) denominator divisible by p") from None
    cands = candidate_discriminants(a_p, p)

    if a_p == 0 and p % 4 == 3:
        # Candidates are -4p and -p.  (pi + 1)/2 is an endomorphism exactly
        # when pi fixes E[2], so full rational 2-torsion picks -p.  This also
        # settles j = 1728, where both class polynomials vanish.
        full = len(roots_mod_p(two_division_poly(Ep))) == 3
        D = -p if full else -4 * p
        c = dict(cands)[D]
        return EndoData(p, a_p, D, c, verified=True)

    cache = cache or default_cache()
    hits = []
    for i, (D, c) in enumerate(cands):
        last = i == len(cands) - 1
        if last and not exhaustive and not hits:
            return EndoData(p, a_p, D, c, verified=False)
        if hilbert_poly(D, cache).evaluate_mod(jE, p) == 0:
            hits.append((D, c))
            if not exhaustive:
                break
    if len(hits) != 1:
        raise InconsistentInvariants(
            f"p={p}: {len(hits)} candidate discriminants vanish among {cands}")
    D, c = hits[0]
    return EndoData(p, a_p, D, c)
