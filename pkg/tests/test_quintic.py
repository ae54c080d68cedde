import random
from fractions import Fraction
from math import isqrt

import mpmath
import pytest
from sympy import primerange

from conftest import EXAMPLE_QUINTIC, QUINTIC_CURVE
from frobdiv.arith import poly_discriminant
from frobdiv.classpoly import EndoData
from frobdiv.curve import CurveQ, good_primes, trace_of
from frobdiv.errors import Degenerate, ExcludedPrime, InvalidArgument, Unsupported
from frobdiv.frobenius import endo_data
from frobdiv.quintic import (
    BrioschiParam,
    PrincipalQuintic,
    brioschi_poly,
    check_prime_for_quintic,
    curve_for_t,
    lambda_quadratic,
    parse_quintic,
    predict_split,
    predict_split_at,
    quintic_roots_mod_p,
    rational_sqrt,
    recognize_scaled_brioschi,
    resolve_quintic,
    split_symbols,
    tschirnhausen,
    verify_split,
)

EXAMPLE_T = Fraction(-9, 6400)


def square_principal_quintics():
    """Small (a, b, c) with a != 0 for which 5 disc is a rational square."""
    out = []
    for a in range(-6, 7):
        if a == 0:
            continue
        for b in range(-6, 7):
            for c in range(-20, 21):
                D = poly_discriminant([c, 5 * b, 5 * a, 0, 0, 1])
                if D and rational_sqrt(5 * D) is not None:
                    out.append((a, b, c))
    return out


SQUARE_QUINTICS = square_principal_quintics()


def rand_t(rng):
    while True:
        t = Fraction(rng.randint(-500, 500), rng.randint(1, 500))
        if t not in (0, Fraction(1, 1728)):
            return t


def twist(E, d):
    # short model y^2 = x^3 - 27 c4 x - 54 c6, twisted by d
    return CurveQ.short(-27 * E.c4 * d * d, -54 * E.c6 * d**3)


def test_brioschi_poly():
    assert brioschi_poly(1) == [-1, 45, 0, -10, 0, 1]
    co = brioschi_poly(EXAMPLE_T)
    assert co[3] == Fraction(9, 640) and co[1] == 45 * Fraction(81, 6400**2)
    assert poly_discriminant(brioschi_poly(1)) == 5**5 * 1727**2
    with pytest.raises(InvalidArgument):
        BrioschiParam(Fraction(1, 1728))
    with pytest.raises(InvalidArgument):
        BrioschiParam(0)


def test_curve_for_t_examples(quintic_curve):
    assert curve_for_t(1).j == 1727
    assert curve_for_t(1).discriminant == -1727**2
    assert curve_for_t(EXAMPLE_T).j == Fraction(21952, 9) == quintic_curve.j


def test_discriminant_identities():
    rng = random.Random(11)
    for _ in range(20):
        t = rand_t(rng)
        assert poly_discriminant(brioschi_poly(t)) == 5**5 * t**8 * (1728 * t - 1) ** 2
        E = curve_for_t(t)
        assert E.discriminant == -t * (1728 * t - 1) ** 2
        assert E.j == 1728 - 1 / t


def test_square_quintic_search_is_nontrivial():
    assert len(SQUARE_QUINTICS) >= 20
    with pytest.raises(InvalidArgument, match=r"sqrt\(5D\) not rational"):
        PrincipalQuintic(1, 0, 1)


def test_lambda_quadratic_discriminant():
    rng = random.Random(3)
    for a, b, c in rng.sample(SQUARE_QUINTICS, 20):
        f = PrincipalQuintic(a, b, c)
        L, M, N = lambda_quadratic(f)
        assert M * M - 4 * L * N == Fraction(a * a, 5**5) * f.discriminant


def test_lambda_residual():
    for a, b, c in SQUARE_QUINTICS[::7]:
        f = PrincipalQuintic(a, b, c)
        try:
            m = tschirnhausen(f)
        except Degenerate:
            continue
        L, M, N = lambda_quadratic(f)
        assert L * m.lam**2 - M * m.lam + N == 0
        assert m.t == 1 / (1728 - m.j)


def test_tschirnhausen_guards():
    with pytest.raises(Unsupported):
        tschirnhausen(PrincipalQuintic(0, -2, -12))
    # the smaller lambda root gives a zero j denominator here; the other is used
    m = tschirnhausen(PrincipalQuintic(1, -3, 12))
    assert m.lam == Fraction(57, 8)


def numeric_roots(coeffs, dps=40):
    with mpmath.workdps(dps):
        high = [mpmath.mpf(x.numerator) / x.denominator for x in reversed([Fraction(c) for c in coeffs])]
        return mpmath.polyroots(high, maxsteps=200, extraprec=4 * dps)


@pytest.mark.parametrize("abc", [(1, -1, 8), (1, -3, 12), (2, -6, 20), (1, 1, 8)])
def test_root_transport(abc):
    f = PrincipalQuintic(*abc)
    m = tschirnhausen(f)
    with mpmath.workdps(40):
        src = numeric_roots(brioschi_poly(m.t))
        dst = numeric_roots(f.coeffs)
        lam, mu, t = (mpmath.mpf(x.numerator) / x.denominator for x in (m.lam, m.mu, m.t))
        images = [(lam + mu * x) / (x * x / t - 3) for x in src]
        used = set()
        for y in images:
            k = min(range(5), key=lambda i: abs(y - dst[i]))
            assert abs(y - dst[k]) < mpmath.mpf(10) ** -20
            used.add(k)
        assert used == set(range(5))


def test_recognize_scaled_brioschi():
    assert recognize_scaled_brioschi(parse_quintic(EXAMPLE_QUINTIC)) == (EXAMPLE_T, Fraction(1, 80))
    assert recognize_scaled_brioschi(brioschi_poly(Fraction(2, 7))) == (Fraction(2, 7), 1)
    assert recognize_scaled_brioschi([1, 1, 0, 1, 0, 1]) is None


def test_recognized_scaling_reproduces_polynomial():
    rng = random.Random(5)
    for _ in range(20):
        t, c = rand_t(rng), Fraction(rng.randint(1, 60), rng.randint(1, 60))
        ft = brioschi_poly(t)
        # f(x) = c^-5 f_t(c x)
        f = [ft[k] * c**k / c**5 for k in range(6)]
        assert recognize_scaled_brioschi(f) == (t, c)


def test_resolve_quintic():
    s = resolve_quintic(parse_quintic(EXAMPLE_QUINTIC))
    assert s.kind == "brioschi" and s.t == EXAMPLE_T and s.curve.j == Fraction(21952, 9)
    s = resolve_quintic(PrincipalQuintic(1, -1, 8).coeffs)
    assert s.kind == "principal" and s.tmap is not None
    with pytest.raises(InvalidArgument, match=r"sqrt\(5D\) not rational"):
        resolve_quintic([1, 1, 1, 0, 0, 1])
    with pytest.raises(Unsupported):
        resolve_quintic([0, 0, 0, 0, 1, 1])


def test_parse_quintic():
    assert parse_quintic(EXAMPLE_QUINTIC) == (-6480, 3645, 0, 90, 0, 1)
    with pytest.raises(InvalidArgument):
        parse_quintic("1,2,3")


def test_table_totality():
    seen = set()
    for p in (7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59):
        for a in range(-2 * isqrt(p), 2 * isqrt(p) + 1):
            n = a * a - 4 * p
            for b in range(1, 30):
                if n % (b * b) == 0:
                    D = n // (b * b)
                    if D % 4 in (0, 1):
                        parts = predict_split(EndoData(p, a, D, b))
                        assert parts.total == 5
                        seen.add(str(parts))
    assert seen == {"(1)^5", "(5)", "(1)(2)^2", "(1)(4)", "(1)^2(3)", "(1)^3(2)", "(2)(3)"}


def test_predict_examples():
    assert str(predict_split(EndoData(1259, 44, -31, 10))) == "(1)^5"
    assert str(predict_split(EndoData(1951, 52, -51, 10))) == "(1)^5"
    # p = 7, a = 3: 9 - 28 = -19 is a square mod 5 and 7 is not
    assert split_symbols(3, 7) == (1, -1)
    assert str(predict_split(EndoData(7, 3, -19, 1))) == "(1)(4)"
    with pytest.raises(ExcludedPrime):
        predict_split(EndoData(5, 0, -20, 1))


def test_complete_splitting_iff_5_divides_b(quintic_curve):
    coeffs = parse_quintic(EXAMPLE_QUINTIC)
    setup = resolve_quintic(coeffs)
    for p in good_primes(quintic_curve, primerange(7, 10000)):
        try:
            check_prime_for_quintic(setup, quintic_curve, p)
        except ExcludedPrime:
            continue
        e = endo_data(quintic_curve, p)
        pred = predict_split(e)
        assert (str(pred) == "(1)^5") == (e.b_p % 5 == 0)
        assert pred == verify_split(coeffs, p), p
        assert predict_split_at(quintic_curve, p) == pred


def test_example_factorizations():
    coeffs = parse_quintic(EXAMPLE_QUINTIC)
    assert str(verify_split(coeffs, 1259)) == "(1)^5"
    assert str(verify_split(coeffs, 1951)) == "(1)^5"
    assert {(-r) % 1259 for r in quintic_roots_mod_p(coeffs, 1259)} == {734, 322, 26, 851, 585}
    assert verify_split(coeffs, 11) == predict_split_at(CurveQ.parse(QUINTIC_CURVE), 11)
    with pytest.raises(ExcludedPrime):
        verify_split(coeffs, 7)  # 7 divides the discriminant


@pytest.mark.parametrize("d", [-1, 2, 3, -5])
def test_twist_invariance(quintic_curve, d):
    coeffs = parse_quintic(EXAMPLE_QUINTIC)
    setup = resolve_quintic(coeffs)
    Et = twist(quintic_curve, d)
    assert Et.j == quintic_curve.j
    for p in good_primes(Et, primerange(7, 3000)):
        try:
            check_prime_for_quintic(setup, quintic_curve, p)
        except ExcludedPrime:
            continue
        assert predict_split_at(Et, p) == verify_split(coeffs, p), (d, p)


def test_kiepert_curve_predicts_too():
    coeffs = parse_quintic(EXAMPLE_QUINTIC)
    setup = resolve_quintic(coeffs)
    E = setup.curve
    for p in good_primes(E, primerange(7, 3000)):
        try:
            check_prime_for_quintic(setup, E, p)
        except ExcludedPrime:
            continue
        assert predict_split_at(E, p) == verify_split(coeffs, p), p


def test_principal_quintic_prediction():
    f = PrincipalQuintic(1, -1, 8)
    setup = resolve_quintic(f.coeffs)
    E = setup.curve
    checked = 0
    for p in good_primes(E, primerange(7, 2000)):
        try:
            check_prime_for_quintic(setup, E, p)
        except ExcludedPrime:
            continue
        assert predict_split_at(E, p) == verify_split(f.coeffs, p), p
        checked += 1
    assert checked > 200


def represents_x2_minus_25Dy2(p, D):
    y = 1
    while -25 * D * y * y <= p:
        r = p + 25 * D * y * y
        if isqrt(r) ** 2 == r:
            return True
        y += 1
    return False


def test_even_invariants_and_norm_form(quintic_curve):
    coeffs = parse_quintic(EXAMPLE_QUINTIC)
    for p in primerange(7, 10000):
        e = endo_data(quintic_curve, p)
        assert e.a_p % 2 == 0 and e.b_p % 2 == 0
        x, y = e.a_p // 2, e.b_p // 2
        assert p == x * x - e.disc * y * y
        try:
            split = str(verify_split(coeffs, p)) == "(1)^5"
        except ExcludedPrime:
            continue
        assert split == (y % 5 == 0) == represents_x2_minus_25Dy2(p, e.disc), p
    for p, D in ((1259, -31), (1951, -51)):
        # y = b/2 = 5, so y' = 1
        assert p == (trace_of(quintic_curve, p).a_p // 2) ** 2 - 25 * D
