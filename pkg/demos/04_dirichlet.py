"""
Dirichlet domains as a cross-check
==================================

The Dirichlet domain at a point c is cut out by perpendicular bisectors
of c and g c.  At c = 0 the bisectors coincide with isometric circles,
so the two constructions must give the same area; off-centre the
polygon changes but the area does not.
"""
from quatdom.domain import build_dirichlet_domain, build_ford_domain

F = build_ford_domain(5, 3)
for c in (0j, 0.1 + 0.05j, -0.2j):
    D = build_dirichlet_domain(5, 3, center=c)
    print("center %-12s sides %2d  area %.12f  (Ford %.12f)  R = %.3f"
          % (c, len(D.sides), D.area, F.area, D.stats["R"]))
