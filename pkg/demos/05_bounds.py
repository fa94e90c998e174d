"""
Exact generators against the a priori bounds
============================================

Chalk's bounds grow explosively; Johansson's epsilon gives a usable
cutoff.  Here both are set against the exact domains.
"""
from quatdom.bounds import chalk_bounds, compare_bounds
from quatdom.domain import build_ford_domain
from quatdom.reports import bounds_summary

ch = chalk_bounds(5, 2)
print("Chalk for (5, 2): N <= %d, ||A_1|| < %.4f, last link ~ %s"
      % (ch.N, ch.first_norm, ch.chain[-1]))

reports = []
print("  p   a   sides  N bound  max ||g||  Johansson bound   ratio")
for p, a in [(3, 2), (5, 2), (5, 3), (7, 3), (7, 5), (11, 2), (13, 2)]:
    rep = compare_bounds(build_ford_domain(p, a))
    reports.append(rep)
    print("%3d %3d %7d %8d %10d %16.1f %7.2f"
          % (p, a, rep.exact_n_sides, rep.chalk_N_bound, rep.exact_max_norm,
             rep.johansson_norm_bound, rep.ratio_over_exact))
print(bounds_summary(reports))
