"""
Reading weights out of a black box
==================================

Feed an aggregator permutation profiles in which one voter stands alone
against a bloc.  If the aggregator is linear, the entry only that voter
activates is exactly that voter's weight for the category.
"""

from fractions import Fraction as F

import numpy as np

from fcaf import Setting
from fcaf.aggregate import Aggregator, wam
from fcaf.characterize import (
    check_weight_equality,
    fit_wam,
    probe_profile,
    probe_system_forces_equal_weights,
    recover_weight_matrix,
)
from fcaf.fixtures import default_per_category_weights, per_category_wam

setting = Setting(3, 3, 3)
secret = wam([F(1, 6), F(1, 2), F(1, 3)], setting)
hidden = Aggregator(setting, secret, "black box")

# %%
# One probe: voter 0 on the identity, the others on a cyclic shift.
print(probe_profile(3, 3, [(0, 1, 2), (1, 2, 0), (1, 2, 0)]).degrees[0])

# %%
# The recovered per-category matrix, and the common weight vector.
wm = recover_weight_matrix(hidden)
print(wm.w)
print("weights:", check_weight_equality(wm))

# %%
# A rule with one weight column per category cannot be read consistently.
# Its probe outputs are not even valid classifications, which is the point:
# validity on the probes is what forces the columns to agree.
fake = per_category_wam(default_per_category_weights(setting), setting)
print(check_weight_equality(recover_weight_matrix(fake, check_validity=False)))

# %%
# The same conclusion from the linear system of one two-voter probe.
print("system forces equal weights:", probe_system_forces_equal_weights([(0, 1, 2), (1, 2, 0)], 3))

# %%
# fit_wam combines recovery with a residual on fresh profiles.
report = fit_wam(hidden)
print(report.weights, report.max_residual, report.is_wam)
print(np.float64(fit_wam(fake).max_residual))
