"""
Enumerating the group by shells
===============================

Elements of Gamma_{p,a} solve x0^2 - a x1^2 - p x2^2 + a p x3^2 = 1.
Grouped by m = a x1^2 + p x2^2 they come out in order of decreasing
isometric-circle radius 1 / sqrt(m).
"""
import numpy as np

from quatdom.geometry import classify, isometric_circle
from quatdom.lattice import element_array, enumerate_shells, torsion_scan

for sh in enumerate_shells(3, 2, 12):
    print("m = %2d:" % sh.m, [g.coords for g in sh.members])

g = next(enumerate_shells(3, 2, 5)).members[0]
c = isometric_circle(g)
print("circle of", g.coords, "center", np.round(c.center, 6), "radius", round(c.radius, 6))

# Only p = 3 mod 4 admits torsion here.
print("torsion in Gamma_(3,2):", [(t.coords, classify(t)) for t in torsion_scan(3, 2, 12)])
print("torsion in Gamma_(5,2) up to m = 10^5:", torsion_scan(5, 2, 10 ** 5))

# Counting elements: growth is roughly linear in m, as the hyperbolic ball area.
X = element_array(5, 2, 20000)
m = 2 * X[:, 1] ** 2 + 5 * X[:, 2] ** 2
for cut in (1000, 5000, 20000):
    print("elements with m <= %5d: %d" % (cut, int(np.sum(m <= cut))))
