"""
Frobenius classes in GL_2(F_q)
==============================

For a curve with surjective mod-q image, the class of Frobenius mod q is
equidistributed with weight proportional to class size. This demo tallies
classes for y^2 = x^3 - 2 at q = 2 and for y^2 + y = x^3 - x at q = 3.
"""

# %%
# Mod 2 the image of y^2 = x^3 - 2 is all of GL_2(F_2), a group of order 6.
from frobdiv.curve import CurveQ
from frobdiv.frobenius import density_count

res = density_count(CurveQ.parse("0,-2"), 2, 20000)
for row in res.rows():
    print(f"class {row['class_index']} size {row['size']}: "
          f"count {row['count']} expected {row['expected']:.1f}")

# %%
# Mod 3 there are 8 classes in a group of order 48.
res = density_count(CurveQ.parse("0,0,1,-1,0"), 3, 20000)
print("primes counted:", res.total)
for row in res.rows():
    print(f"{str(row['representative']):<18} size {row['size']:>2}  "
          f"count {row['count']:>4}  rel dev {row['rel_dev']:+.3f}")
