"""Independent reference implementations used to freeze expected values.

Nothing here imports the package; everything is plain Python on nested
lists of Fractions (plus mpmath for roots and numpy for the crisp scan).
"""

import itertools
from fractions import Fraction as F

import mpmath
import numpy as np

# Three voters, three objects, three categories.  EXAMPLE_VOTERS[i][j] is
# what voter i says about object j.
EXAMPLE_VOTERS = [
    [[F(1, 3), F(2, 3), F(0)], [F(2, 3), F(0), F(1, 3)], [F(0), F(1, 3), F(2, 3)]],
    [[F(1), F(0), F(0)], [F(0), F(0), F(1)], [F(0), F(1), F(0)]],
    [[F(1, 2), F(1, 4), F(1, 4)], [F(1, 2), F(0), F(1, 2)], [F(0), F(3, 4), F(1, 4)]],
]
EXAMPLE_WEIGHTS = [F(1, 2), F(0), F(1, 2)]
EXAMPLE_OUTPUT = [
    [F(10, 24), F(11, 24), F(3, 24)],
    [F(14, 24), F(0), F(10, 24)],
    [F(0), F(13, 24), F(11, 24)],
]


def wam(weights, voters):
    m, p = len(voters[0]), len(voters[0][0])
    return [[sum(w * v[j][t] for w, v in zip(weights, voters)) for t in range(p)]
            for j in range(m)]


def power_mean(q, xs, dps=50):
    with mpmath.workdps(dps):
        mean = mpmath.fsum((mpmath.mpf(F(x).numerator) / F(x).denominator) ** q for x in xs) / len(xs)
        root = mpmath.root(abs(mean), q)
        return float(root if mean >= 0 else -root)


def stirling2(m, p):
    """Partitions of an m-set into p nonempty blocks, by the usual recurrence."""
    table = [[0] * (p + 1) for _ in range(m + 1)]
    table[0][0] = 1
    for i in range(1, m + 1):
        for k in range(1, p + 1):
            table[i][k] = k * table[i - 1][k] + table[i - 1][k - 1]
    return table[m][p]


def factorial(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def surjections(m, p):
    return [a for a in itertools.product(range(p), repeat=m) if len(set(a)) == p]


def crisp_naive(n, m, p):
    """Every unanimous table tuple, checked against every surjective profile.

    Returns sorted tuples ``tables`` where ``tables[x]`` lists outputs in
    lexicographic order of voter tuples.  Exponential; tiny inputs only.
    """
    tups = list(itertools.product(range(p), repeat=n))
    free = [k for k, tup in enumerate(tups) if len(set(tup)) > 1]
    profiles = list(itertools.product(surjections(m, p), repeat=n))
    found = []
    for choice in itertools.product(range(p), repeat=len(free) * m):
        tables = []
        for x in range(m):
            row = [tup[0] for tup in tups]
            for k, v in zip(free, choice[x * len(free):(x + 1) * len(free)]):
                row[k] = v
            tables.append(tuple(row))
        ok = all(
            len({tables[x][tups.index(tuple(c[x] for c in prof))] for x in range(m)}) == p
            for prof in profiles)
        if ok:
            found.append(tuple(tables))
    return sorted(found)


def crisp_pairwise_33():
    """Full scan of n = 2, m = p = 3 by pairwise compatibility.

    With m = p = 3 a surjective output is a bijection, so a triple of
    tables survives iff every pair of objects always gets distinct
    categories.  Each object has 3^6 unanimous tables; compatibility is
    computed for all pairs with numpy and survivors are read off the
    triangle of compatible pairs.
    """
    tups = list(itertools.product(range(3), repeat=2))
    free = [k for k, tup in enumerate(tups) if tup[0] != tup[1]]
    tables = np.array([[tup[0] for tup in tups]] * 3 ** len(free))
    for r, choice in enumerate(itertools.product(range(3), repeat=len(free))):
        tables[r, free] = choice
    perms = list(itertools.permutations(range(3)))
    # cell index per object for every profile (pi1, pi2)
    cells = np.array([[3 * a[x] + b[x] for x in range(3)] for a in perms for b in perms])
    compat = {}
    for x, y in ((0, 1), (0, 2), (1, 2)):
        ox = tables[:, cells[:, x]]  # (T, profiles)
        oy = tables[:, cells[:, y]]
        compat[(x, y)] = np.all(ox[:, None, :] != oy[None, :, :], axis=2)
    survivors = []
    for a, b in zip(*np.nonzero(compat[(0, 1)])):
        for c in np.nonzero(compat[(0, 2)][a] & compat[(1, 2)][b])[0]:
            survivors.append(tuple(tuple(int(v) for v in tables[i]) for i in (a, b, c)))
    return sorted(survivors)
