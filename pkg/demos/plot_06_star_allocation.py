"""
Allocating hours: the scale-s variant
=====================================

Rows may sum to any s, say eight working hours per machine spread over
tasks.  A weighted mean keeps every task's column total at s.
"""

from fractions import Fraction as F

from fcaf import Profile, Setting, Weights, star_wam
from fcaf.aggregate import wam
from fcaf.axioms import Sampled, check_k_allocation

hours = Setting.star(2, 2, 2, 8)
c = Profile([[[8, 0], [0, 8]], [[0, 8], [8, 0]]], hours)
out = star_wam(Weights([F(3, 4), F(1, 4)]), c)
print(out, "column totals", out.sum(axis=0))

# %%
# Negative and fractional scales work the same way.
for s in (8, -1, F(5, 2)):
    agg = wam([F(1, 2), F(1, 3), F(1, 6)], Setting.star(3, 3, 3, s))
    print(f"s = {s}:", check_k_allocation(agg, Sampled(count=500)).summary())
