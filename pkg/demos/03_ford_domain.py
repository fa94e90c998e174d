"""
A Ford domain for Gamma_{5,2}
=============================

Isometric circles are added in order of increasing m until the region
closes and no smaller circle can cut it.  The area is then compared with
the covolume.
"""
import math

from quatdom.domain import build_ford_domain, side_pairing_errors
from quatdom.reports import render_svg

D = build_ford_domain(5, 2)
print("area %.12f = %.12f (8 pi)" % (D.area, 8 * math.pi))
print("certified:", D.certified, " closed at m =", D.closure_m,
      " shells consumed to m =", D.shells_consumed)
print("sides", len(D.sides), " generators", len(D.generators), " genus", D.stats["genus"])
for g in D.generators:
    print("  ", g.coords)

# Each side is carried onto its partner by the element that owns it.
print("worst side-pairing error %.2e" % max(side_pairing_errors(D)))

render_svg(D, "ford_5_2.svg")
print("wrote ford_5_2.svg")

# (3, 2) has elliptic points of order 2 and 3 in PSL(2, R).
E = build_ford_domain(3, 2)
print("(3, 2): elliptic orders", E.stats["elliptic_orders"], " area / pi =", E.area / math.pi)
