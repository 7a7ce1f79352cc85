"""Exhaustive search over independent, unanimous crisp aggregators.

An independent crisp aggregator is one elementary table per object, mapping
the voters' category tuple for that object to an output category.
Unanimity pins ``table[(t, ..., t)] = t``.  :func:`enumerate_valid_cafs`
fills the remaining entries depth first (objects outer, tuples inner,
categories ascending) and keeps only tables whose output is surjective on
every surjective input profile.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetExceeded
from .sample import enumerate_crisp_classifications

DEFAULT_BUDGET = 10**9


def tuples(n: int, p: int) -> list[tuple[int, ...]]:
    """Voter category tuples in lexicographic order; table entries follow this order."""
    return list(itertools.product(range(p), repeat=n))


@dataclass(frozen=True)
class CrispCAF:
    """``tables[x][k]`` is the output category of object ``x`` for tuple number ``k``."""

    n: int
    m: int
    p: int
    tables: tuple[tuple[int, ...], ...]

    def index(self, tup: Sequence[int]) -> int:
        k = 0
        for t in tup:
            k = k * self.p + t
        return k

    def __call__(self, profile: Sequence[Sequence[int]]) -> tuple[int, ...]:
        """Apply to a crisp profile given as one assignment per voter."""
        return tuple(self.tables[x][self.index([c[x] for c in profile])] for x in range(self.m))

    @classmethod
    def dictator(cls, i: int, n: int, m: int, p: int) -> "CrispCAF":
        table = tuple(tup[i] for tup in tuples(n, p))
        return cls(n, m, p, (table,) * m)

    @classmethod
    def majority(cls, n: int, m: int, p: int) -> "CrispCAF":
        """Plurality per object; ties go to the tied category named by the lowest voter."""
        def pick(tup):
            counts = Counter(tup)
            top = max(counts.values())
            return next(t for t in tup if counts[t] == top)
        table = tuple(pick(tup) for tup in tuples(n, p))
        return cls(n, m, p, (table,) * m)


def surjective_profiles(n: int, m: int, p: int):
    return list(itertools.product(enumerate_crisp_classifications(m, p), repeat=n))


def realizable_tuples(n: int, m: int, p: int) -> list[set[tuple[int, ...]]]:
    """Per object, the voter tuples that occur in some surjective profile."""
    seen = [set() for _ in range(m)]
    for prof in surjective_profiles(n, m, p):
        for x in range(m):
            seen[x].add(tuple(c[x] for c in prof))
    return seen


def violating_profile(caf: CrispCAF):
    """A surjective profile whose output is not surjective, or None."""
    target = set(range(caf.p))
    for prof in surjective_profiles(caf.n, caf.m, caf.p):
        if set(caf(prof)) != target:
            return prof
    return None


def is_dictatorial(caf: CrispCAF) -> int | None:
    """The voter whose category every table copies, if there is one."""
    tups = tuples(caf.n, caf.p)
    for i in range(caf.n):
        if all(table[k] == tup[i] for table in caf.tables for k, tup in enumerate(tups)):
            return i
    return None


@dataclass
class SearchStats:
    expansions: int = 0
    free_entries: int = 0
    profiles: int = 0


def enumerate_valid_cafs(n: int, m: int, p: int, budget: int = DEFAULT_BUDGET,
                         stats: SearchStats | None = None) -> list[CrispCAF]:
    """All unanimous independent crisp aggregators that preserve surjectivity.

    A partial assignment is pruned as soon as some profile has fewer
    undetermined objects than categories still missing from its output.
    Raises :class:`BudgetExceeded` after ``budget`` node expansions.
    """
    stats = SearchStats() if stats is None else stats
    tups = tuples(n, p)
    K = len(tups)
    profiles = surjective_profiles(n, m, p)
    stats.profiles = len(profiles)

    # cell (x, k) -> value; unanimous cells fixed up front
    value: list[list[int | None]] = [[None] * K for _ in range(m)]
    for x in range(m):
        for k, tup in enumerate(tups):
            if len(set(tup)) == 1:
                value[x][k] = tup[0]
    free = [(x, k) for x in range(m) for k in range(K) if value[x][k] is None]
    stats.free_entries = len(free)

    # each profile as its list of cells, one per object
    def index(tup):
        k = 0
        for t in tup:
            k = k * p + t
        return k

    cells = [[(x, index([c[x] for c in prof])) for x in range(m)] for prof in profiles]
    touching: dict[tuple[int, int], list[int]] = {cell: [] for cell in free}
    for q, prof_cells in enumerate(cells):
        for cell in prof_cells:
            if cell in touching:
                touching[cell].append(q)

    def feasible(q: int) -> bool:
        seen = set()
        open_ = 0
        for x, k in cells[q]:
            v = value[x][k]
            if v is None:
                open_ += 1
            else:
                seen.add(v)
        return p - len(seen) <= open_

    if not all(feasible(q) for q in range(len(profiles))):
        return []

    survivors: list[CrispCAF] = []

    def search(depth: int):
        if depth == len(free):
            survivors.append(CrispCAF(n, m, p, tuple(tuple(row) for row in value)))
            return
        x, k = free[depth]
        for t in range(p):
            stats.expansions += 1
            if stats.expansions > budget:
                raise BudgetExceeded(stats.expansions, survivors)
            value[x][k] = t
            if all(feasible(q) for q in touching[(x, k)]):
                search(depth + 1)
        value[x][k] = None

    search(0)
    return survivors


def verify_impossibility(n: int, m: int, p: int, budget: int = DEFAULT_BUDGET):
    """Run the search and classify survivors.

    Returns ``(survivors, dictators)`` where ``dictators[i]`` is the voter a
    survivor copies or None.  The impossibility holds for the instance when
    every survivor is dictatorial and each voter's dictatorship survives.
    """
    survivors = enumerate_valid_cafs(n, m, p, budget)
    return survivors, [is_dictatorial(c) for c in survivors]


def impossibility_holds(survivors, dictators, n: int) -> bool:
    return all(d is not None for d in dictators) and sorted(dictators) == list(range(n))
