"""
Only dictators survive (crisp, two voters, three categories)
============================================================

A crisp independent aggregator is one lookup table per object from the
voters' category pair to an output category.  Pin the unanimous entries,
search all remaining tables, and keep those that always produce a
surjective classification.
"""

import time

from fcaf.crisp import CrispCAF, SearchStats, enumerate_valid_cafs, is_dictatorial, violating_profile

stats = SearchStats()
t0 = time.perf_counter()
survivors = enumerate_valid_cafs(2, 3, 3, stats=stats)
print(f"{len(survivors)} survivors out of 3^{stats.free_entries} candidate tables "
      f"({stats.expansions} expansions, {time.perf_counter() - t0:.3f}s)")
for caf in survivors:
    print("dictator:", is_dictatorial(caf), caf.tables[0])

# %%
# Mixing dictators across objects fails on a concrete profile.
d0 = CrispCAF.dictator(0, 2, 3, 3).tables[0]
d1 = CrispCAF.dictator(1, 2, 3, 3).tables[0]
mixed = CrispCAF(2, 3, 3, (d0, d1, d1))
prof = violating_profile(mixed)
print("profile", prof, "->", mixed(prof))

# %%
# With only two categories there is slack: more than the two dictators survive.
print(len(enumerate_valid_cafs(2, 2, 2)), "survivors for m = p = 2")
