"""
Hunting for axiom violations
============================

The checkers are falsifiers: they sample profiles and look for a
counterexample.  A clean run means nothing was found in the trial budget;
a failure comes with a witness that can be replayed.
"""

from fractions import Fraction as F

from fcaf import Setting
from fcaf.aggregate import mean, wam
from fcaf.axioms import Sampled, check_anonymity, check_non_dictatorship, run_suite
from fcaf.fixtures import builtin_fixtures

setting = Setting(2, 3, 3)
budget = Sampled(count=300, seed=1)

# %%
# A non-degenerate weighted mean passes everything except anonymity.
for report in run_suite(wam([F(3, 4), F(1, 4)], setting), source=budget):
    print(report.summary())

# %%
# The anonymity witness is a concrete profile plus a voter swap.
skewed = wam([F(3, 4), F(1, 4)], setting)
report = check_anonymity(skewed, budget)
print(report.witness.permutation, "replays:", report.replay(skewed))
print(check_anonymity(mean(setting), budget).summary())

# %%
# Dictatorship cannot be proven by sampling, only suspected.
print(check_non_dictatorship(wam([1, 0], setting), budget).summary())

# %%
# Every built-in fixture, one row each: which axioms survive?
names = ["fuzzy-consensus", "unanimity", "zero-unanimity", "independence", "symmetry"]
print(f"{'fixture':18s}", *(n[:6] for n in names))
for name, agg in builtin_fixtures(setting).items():
    verdicts = {r.axiom: r.verdict[0].upper() for r in run_suite(agg, names, Sampled(count=100))}
    print(f"{name:18s}", *(f"{verdicts[n]:6s}" for n in names))
