"""
Hilbert class polynomials
=========================

H_D has the j-invariants of the reduced forms of discriminant D as roots.
Its degree is the class number, and its coefficients are integers.
"""

# %%
# Small examples, including the two used at p = 1259 and p = 1951.
from frobdiv.classpoly import compute_hilbert_poly
from frobdiv.curve import CurveQ, reduce_mod
from frobdiv.quadform import reduced_forms

for D in (-3, -4, -23, -31, -51):
    H = compute_hilbert_poly(D)
    print(f"D={D}: forms {[(f.A, f.B, f.C) for f in reduced_forms(D).forms]} "
          f"coeffs {H.coeffs[::-1]}")

# %%
# j(E) mod 1259 is a root of H_{-31}, so the discriminant at 1259 is -31.
E = CurveQ.parse("0,-4,0,3,0")
jp = reduce_mod(E, 1259).j
print("H_-31(j) mod 1259 =", compute_hilbert_poly(-31).evaluate_mod(jp, 1259))
print("H_-124(j) mod 1259 =", compute_hilbert_poly(-124).evaluate_mod(jp, 1259))

# %%
# A larger one: degree, size and rounding distance to the nearest integers.
H = compute_hilbert_poly(-9999)
print(f"D=-9999: degree {H.degree}, largest coefficient has "
      f"{len(str(max(abs(c) for c in H.coeffs)))} digits, rounding error {H.rounding_error:.1e}")
