"""
Quaternion algebras, orders and covolumes
==========================================

The groups studied here live in H = (a, p / Q) with i^2 = a, j^2 = p,
where p is an odd prime and a is a non-residue mod p.
"""
from quatdom.arith import INFINITY, QuatAlgebra, hilbert_symbol
from quatdom.orders import QuatOrder, canonical_covolume, eichler_invariant_radical

# Hilbert symbols decide where H ramifies.
for v in (INFINITY, 2, 5):
    print("(2, 5)_%s =" % v, hilbert_symbol(2, 5, v))

H = QuatAlgebra(2, 5)
print("ramified at", sorted(H.ramified_places, key=str), " d_H =", H.discriminant)

# The order Z[1, i, j, ij] is not maximal: its discriminant is 4ap.
O = QuatOrder.canonical(5, 2)
print("d(O) =", O.reduced_discriminant)
print("ternary form", O.ternary_form)
for q in (2, 5):
    print("  Eichler invariant at", q, "=", eichler_invariant_radical(O, q))

# The covolume of its norm-one group is the maximal-order volume times
# a product of local indices.
cov = canonical_covolume(5, 2)
print("covolume = %s pi  (maximal %s pi, index %s)" % (cov.over_pi, cov.maximal_over_pi, cov.index))
for li in cov.local:
    print("  q = %d: e = %s, [Z_q^*: n(O_q^*)] = %d, local index %s"
          % (li.q, li.eichler_invariant, li.norm_index, li.unit_index))
