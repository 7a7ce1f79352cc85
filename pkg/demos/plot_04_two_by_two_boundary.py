"""
Two objects, two categories: room for nonlinear rules
=====================================================

With two objects and two categories the constraints are loose enough for
rules built from any odd function h.  The cubic power mean is one: valid,
symmetric, zero-unanimous, and still not a weighted mean.  Apply the same
entrywise rule to three objects and row sums break.
"""

from fractions import Fraction as F

from fcaf import Profile, Setting
from fcaf.aggregate import odd_h, per_entry_power_rule
from fcaf.axioms import Sampled, check_output_validity, check_symmetry, check_zero_unanimity
from fcaf.characterize import fit_wam

rule = odd_h(3, Setting(2, 2, 2))

# %%
# Two voters who disagree completely meet in the middle.
split = Profile.from_voters([[[1, 0], [0, 1]], [[0, 1], [1, 0]]])
print(rule(split))

# %%
# One voter sure, one undecided: the cube mean leans toward certainty.
lean = Profile.from_voters([[[1, 0], [0, 1]], [[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]]])
print(rule(lean))

# %%
for check in (check_output_validity, check_zero_unanimity, check_symmetry):
    print(check(rule, Sampled(count=1000)).summary())

# %%
fit = fit_wam(rule)
print("best weights", fit.weights, "residual", float(fit.max_residual), "is WAM:", fit.is_wam)

# %%
# Three objects: the same entrywise rule no longer produces classifications.
cubic = per_entry_power_rule(3, Setting(2, 3, 3))
report = check_output_validity(cubic, Sampled(count=200))
print(report.summary())
print(cubic(report.witness.profiles[0]).astype(float).sum(axis=1))
