"""
Splitting of a Brioschi quintic from Frobenius
==============================================

The quintic ``x^5 + 90x^3 + 3645x - 6480`` is a rescaled Brioschi quintic.
Its splitting type at a prime p is predicted from the trace and cofactor of
Frobenius on ``y^2 = x(x-1)(x-3)``, a curve with the matching j-invariant.
"""

# %%
# Recognize the quintic and find its Brioschi parameter.
from frobdiv.curve import CurveQ
from frobdiv.frobenius import endo_data
from frobdiv.quintic import (
    parse_quintic,
    predict_split,
    quintic_roots_mod_p,
    resolve_quintic,
    verify_split,
)

coeffs = parse_quintic("0,90,0,3645,-6480")
setup = resolve_quintic(coeffs)
print("kind:", setup.kind, " t =", setup.t, " scale =", setup.scale)
print("j of the Kiepert curve:", setup.curve.j)

# %%
# The curve y^2 = x(x-1)(x-3) has the same j-invariant, so either curve works.
E = CurveQ.parse("0,-4,0,3,0")
print("j(E) =", E.j)

# %%
# At 1259 and 1951 the cofactor b_p is divisible by 5, which predicts that
# the quintic factors completely. Factoring mod p confirms it.
for p in (1259, 1951):
    e = endo_data(E, p)
    roots = sorted((-r) % p for r in quintic_roots_mod_p(coeffs, p))
    print(f"p={p}: a={e.a_p} D={e.disc} b={e.b_p} predicted {predict_split(e)}, "
          f"observed {verify_split(coeffs, p)}, -roots {roots}")

# %%
# A short table of predicted and observed types for small primes.
for p in (11, 13, 17, 19, 23, 29, 31, 37, 41):
    e = endo_data(E, p)
    print(f"{p:>3}  {str(predict_split(e)):<10} {verify_split(coeffs, p)}")
