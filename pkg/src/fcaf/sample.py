"""Seeded generators of valid classifications and profiles, plus crisp enumeration.

All random draws live on a dyadic lattice (denominator ``2**20``) so every
sample is an exact rational and validates without tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import TooLarge
from .model import STAR, Profile, Setting, embed_crisp

LATTICE = 2**20

BIRKHOFF = "birkhoff"
DIRICHLET = "dirichlet"
VERTEX = "vertex"
STRATEGIES = (BIRKHOFF, DIRICHLET, VERTEX)


@dataclass(frozen=True)
class SamplerConfig:
    """How to draw profiles.

    ``k_terms`` is the number of vertices mixed by the Birkhoff strategy and
    ``max_attempts`` the rejection budget of the Dirichlet strategy before
    it repairs.
    """

    setting: Setting
    seed: int = 0
    strategy: str = BIRKHOFF
    k_terms: int = 3
    max_attempts: int = 8

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.k_terms < 1 or self.max_attempts < 1:
            raise ValueError("k_terms and max_attempts must be positive")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def simplex_point(k: int, rng: np.random.Generator, denominator: int = LATTICE) -> list[Fraction]:
    """Lattice approximation of a uniform draw from the (k-1)-simplex."""
    cuts = np.sort(rng.integers(0, denominator + 1, size=k - 1))
    edges = [0, *(int(c) for c in cuts), denominator]
    return [Fraction(b - a, denominator) for a, b in zip(edges, edges[1:])]


def random_surjection(m: int, p: int, rng: np.random.Generator) -> tuple[int, ...]:
    """A random surjective assignment of m objects onto p categories."""
    assignment = [int(t) for t in rng.integers(0, p, size=m)]
    slots = rng.permutation(m)[:p]
    for t, j in enumerate(rng.permutation(p)):
        assignment[int(slots[t])] = int(j)
    return tuple(assignment)


def _mix(vertices, coefficients) -> np.ndarray:
    out = np.full(vertices[0].shape, Fraction(0), dtype=object)
    for a, v in zip(coefficients, vertices):
        if a:
            out = out + a * v
    return out


def sample_birkhoff(m: int, p: int, rng: np.random.Generator, k_terms: int = 3) -> np.ndarray:
    """Convex combination of ``k_terms`` random one-hot surjective classifications.

    When m = p the vertices are permutation matrices and the result is a
    doubly stochastic matrix.
    """
    vertices = [embed_crisp(random_surjection(m, p, rng), p) for _ in range(k_terms)]
    return _mix(vertices, simplex_point(k_terms, rng))


def sample_square_classification(m: int, rng: np.random.Generator, k_terms: int = 3) -> np.ndarray:
    return sample_birkhoff(m, m, rng, k_terms)


def _blend_factor(start, end, floor) -> Fraction:
    """Smallest lam in [0, 1] with ``(1-lam)*start + lam*end >= floor`` everywhere.

    ``end`` must already satisfy the floor.
    """
    lam = Fraction(0)
    for a, b, f in zip(start, end, floor):
        if a < f:
            lam = max(lam, (f - a) / (b - a))
    return lam


def sample_rect_classification(m: int, p: int, rng: np.random.Generator,
                               max_attempts: int = 8) -> np.ndarray:
    """Rows drawn from the simplex, accepted when every column reaches 1.

    After ``max_attempts`` rejections the last draw is blended toward the
    uniform ``1/p`` matrix (column sums ``m/p``) by the smallest factor that
    makes all columns feasible.
    """
    if m < p:
        raise ValueError("m must be at least p")
    for _ in range(max_attempts):
        c = np.array([simplex_point(p, rng) for _ in range(m)], dtype=object)
        cols = c.sum(axis=0)
        if all(s >= 1 for s in cols):
            return c
    uniform = np.full((m, p), Fraction(1, p), dtype=object)
    lam = _blend_factor(cols, uniform.sum(axis=0), [1] * p)
    return (1 - lam) * c + lam * uniform


def sample_dirichlet_square(m: int, rng: np.random.Generator, max_attempts: int = 8) -> np.ndarray:
    """First m-1 rows from the simplex, last row forced so every column sums to 1.

    Rejected while the forced row has a negative entry; after
    ``max_attempts`` the free rows are blended toward ``1/m`` until it does not.
    """
    for _ in range(max_attempts):
        free = np.array([simplex_point(m, rng) for _ in range(m - 1)], dtype=object)
        last = 1 - free.sum(axis=0)
        if all(x >= 0 for x in last):
            return np.vstack([free, last[None, :]])
    uniform = np.full((m - 1, m), Fraction(1, m), dtype=object)
    # the forced row is affine in the blend factor and equals 1/m at lam = 1
    lam = _blend_factor(last, [Fraction(1, m)] * m, [0] * m)
    free = (1 - lam) * free + lam * uniform
    return np.vstack([free, (1 - free.sum(axis=0))[None, :]])


def sample_unit_classification(m: int, p: int, rng: np.random.Generator,
                               strategy: str = BIRKHOFF, k_terms: int = 3,
                               max_attempts: int = 8) -> np.ndarray:
    """A valid standard (scale 1) classification drawn with ``strategy``."""
    if strategy == BIRKHOFF:
        return sample_birkhoff(m, p, rng, k_terms)
    if strategy == VERTEX:
        return embed_crisp(random_surjection(m, p, rng), p)
    if strategy == DIRICHLET:
        if m == p:
            return sample_dirichlet_square(m, rng, max_attempts)
        return sample_rect_classification(m, p, rng, max_attempts)
    raise ValueError(f"unknown strategy {strategy!r}")


def sample_classification(setting: Setting, rng: np.random.Generator, strategy: str = BIRKHOFF,
                          k_terms: int = 3, max_attempts: int = 8) -> np.ndarray:
    """Valid classification for ``setting``; star settings rescale a unit sample."""
    c = sample_unit_classification(setting.m, setting.p, rng, strategy, k_terms, max_attempts)
    if setting.variant != STAR or setting.scale == 1:
        return c
    if setting.scale != 0:
        return setting.scale * c
    # s = 0: a row shuffle keeps every column sum, so the difference has all sums zero
    return c - c[rng.permutation(setting.m)]


def sample_profile(config: SamplerConfig, rng: np.random.Generator | None = None) -> Profile:
    rng = config.rng() if rng is None else rng
    s = config.setting
    voters = [sample_classification(s, rng, config.strategy, config.k_terms, config.max_attempts)
              for _ in range(s.n)]
    return Profile(np.array(voters, dtype=object), s)


def surjection_count(m: int, p: int) -> int:
    """``p! * S(m, p)`` by inclusion-exclusion."""
    return sum((-1) ** k * math.comb(p, k) * (p - k) ** m for k in range(p + 1))


def enumerate_crisp_classifications(m: int, p: int, limit: int = 10**7) -> list[tuple[int, ...]]:
    """All surjections ``range(m) -> range(p)`` in lexicographic order."""
    if m < p:
        raise ValueError("m must be at least p")
    count = surjection_count(m, p)
    if count > limit:
        raise TooLarge(f"{count} surjections exceed the limit {limit}")
    target = set(range(p))
    return [a for a in itertools.product(range(p), repeat=m) if set(a) == target]
