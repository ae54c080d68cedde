"""
The cube root of 2 and the curve y^2 = x^3 - 15x + 22
=====================================================

``x^3 - 2`` splits completely mod p exactly when ``p = x^2 + 27y^2``. The
curve ``y^2 = x^3 - 15x + 22`` has complex multiplication by the order of
discriminant -12, and its Frobenius matrix mod 3 gives a third view of the
same primes.
"""

# %%
# The curve has j = 54000 and, at every ordinary prime, discriminant -12.
from sympy import primerange

from frobdiv.cli import gauss_row
from frobdiv.curve import CurveQ
from frobdiv.frobenius import endo_data, frob_matrix, reduce_mod_q

E = CurveQ.parse("0,0,0,-15,22")
print("j(E) =", E.j)
for p in (7, 13, 31, 43):
    e = endo_data(E, p)
    print(f"p={p}: a={e.a_p} D={e.disc} b={e.b_p} [p] mod 3 = {reduce_mod_q(frob_matrix(e), 3).rows()}")

# %%
# Primes p = 1 mod 3 where [p] is +-Id mod 3 are those where x^3 - 2 splits.
rows = [gauss_row(p, E) for p in primerange(5, 400)]
print("splitting primes:", [r["p"] for r in rows if r["x3_minus_2_splits"]])
print("all three views agree:", all(r["agree"] for r in rows))
