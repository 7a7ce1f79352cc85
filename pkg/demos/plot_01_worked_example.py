"""
Aggregating three fuzzy opinions
================================

Three experts spread three objects over three categories.  A weighted
arithmetic mean with weights (1/2, 0, 1/2) ignores the second expert and
averages the other two, entry by entry, in exact rational arithmetic.
"""

from fractions import Fraction as F

from fcaf import Profile, Setting, Weights, restrict, validate_classification, wam_aggregate

# %%
# Each voter is an objects x categories matrix whose rows sum to one.
voters = [
    [[F(1, 3), F(2, 3), 0], [F(2, 3), 0, F(1, 3)], [0, F(1, 3), F(2, 3)]],
    [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
    [[F(1, 2), F(1, 4), F(1, 4)], [F(1, 2), 0, F(1, 2)], [0, F(3, 4), F(1, 4)]],
]
profile = Profile.from_voters(voters, Setting(3, 3, 3))

# %%
# What everybody says about the first object:
print(restrict(profile, 0))

# %%
# The social classification.  Every entry is a Fraction, no rounding.
out = wam_aggregate(Weights([F(1, 2), 0, F(1, 2)]), profile)
for j, row in enumerate(out):
    print(f"x{j + 1}:", ", ".join(str(v) for v in row))

# %%
# The result is itself a valid classification (rows sum to 1, columns to 1).
print("valid:", validate_classification(out, profile.setting) is None)
