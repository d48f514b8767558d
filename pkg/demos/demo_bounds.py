"""Exact dangerous-syndrome counts against the analytic bounds.

Reproduces the counting table, the chain-count bound, the clamped
logical-rate curves and the 6.25% asymptotic threshold.
Run:  python demos/demo_bounds.py
"""

from colourcode.combinatorics import (
    asymptotic_threshold,
    bound_AdFk,
    bound_pL,
    bound_pL_clamped,
    bound_ratio,
    count_AdF,
    gradient_check,
    threshold_trace,
)
from colourcode.lattice import build_lattice

print("exact A_d(F) versus the analytic bound (lambda = 0):")
table = {}
for d in (3, 5, 7):
    exact = count_AdF(build_lattice(d))
    table[d] = exact
    print("  d=%d: exact %8d   bound %12d" % (d, exact, bound_AdFk(d, 0)))

print("\nfitted growth base of the exact counts: %.1f"
      % gradient_check(table))

print("\nclamped logical-rate bound at p0 = 0.05 (fluctuating "
      "pseudo-thresholds come from the per-k clamp):")
for d in (3, 5, 7, 9):
    print("  d=%d: plain %.3e   clamped %.3e"
          % (d, bound_pL(d, 0.05), bound_pL_clamped(d, 0.05)))

print("\n" + threshold_trace())
th = float(asymptotic_threshold())
print("\nsuccessive-distance bound ratios at p0 = p_th = %.4f:" % th)
for d in (11, 51, 201, 801):
    print("  d=%4d -> %.4f" % (d, bound_ratio(d, th)))
print("below threshold (p0=0.05) the large-d ratio drops under 1: %.4f"
      % bound_ratio(801, 0.05))
