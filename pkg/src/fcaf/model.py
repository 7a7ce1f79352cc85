"""Domain types: settings, classifications, profiles and weights.

Classifications are ``m x p`` numpy object arrays holding :class:`Fraction`
entries (row ``j`` is object ``x_j``, column ``t`` is category ``t``).  A
profile stacks ``n`` of them into an ``(n, m, p)`` array.  All indices are
0-based.  Aggregators that are not rational valued (odd power means) may put
floats into their outputs; :func:`validate_classification` accepts a
tolerance for those and is exact otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidClassification,
    InvalidPermutation,
    InvalidWeights,
    NotSurjective,
    SettingError,
)

STANDARD = "standard"
STAR = "star"

#: Denominator cap used when a float has to become a rational.
MAX_DENOMINATOR = 10**9


def to_fraction(x) -> Fraction:
    """Coerce ints, rationals, ``"num/den"`` / decimal strings and floats.

    Floats are snapped to the nearest rational with denominator at most
    ``MAX_DENOMINATOR``; everything else converts exactly.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not membership degrees")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        if not np.isfinite(x):
            raise ValueError(f"non-finite degree {x!r}")
        return Fraction(float(x)).limit_denominator(MAX_DENOMINATOR)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def as_matrix(rows) -> np.ndarray:
    """Build an object array of Fractions from any nested sequence."""
    arr = np.array(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_fraction(v)
    return out


def is_exact(values) -> bool:
    """True when every entry is an int or Fraction (no floats leaked in)."""
    arr = np.asarray(values, dtype=object)
    return all(isinstance(v, (int, Fraction)) for v in arr.flat)


@dataclass(frozen=True)
class Setting:
    """Sizes and surjectivity regime shared by a profile and its aggregator.

    ``variant`` is ``"standard"`` (degrees in [0, 1], rows sum to 1, columns
    at least 1) or ``"star"`` (rows sum to ``scale``, columns at least
    ``scale`` when it is nonnegative and at most ``scale`` otherwise).
    """

    n: int
    m: int
    p: int
    scale: Fraction = Fraction(1)
    variant: str = STANDARD

    def __post_init__(self):
        object.__setattr__(self, "scale", to_fraction(self.scale))
        if self.variant not in (STANDARD, STAR):
            raise SettingError(f"unknown variant {self.variant!r}")
        if self.n < 1:
            raise SettingError("need at least one voter")
        if not self.m >= self.p >= 2:
            raise SettingError(f"need m >= p >= 2, got m={self.m}, p={self.p}")
        if self.variant == STANDARD and self.scale != 1:
            raise SettingError("the standard setting fixes scale = 1")

    @classmethod
    def star(cls, n: int, m: int, p: int, scale) -> "Setting":
        return cls(n, m, p, to_fraction(scale), STAR)

    @property
    def square(self) -> bool:
        return self.m == self.p

    @property
    def shape(self) -> tuple[int, int]:
        return (self.m, self.p)

    def with_n(self, n: int) -> "Setting":
        return Setting(n, self.m, self.p, self.scale, self.variant)


@dataclass(frozen=True)
class Violation:
    """First broken constraint found by :func:`validate_classification`.

    ``kind`` is ``"entry"`` (index is ``(row, col)``), ``"row"`` or
    ``"column"``; ``actual`` is the offending value or sum.
    """

    kind: str
    index: int | tuple[int, int]
    actual: object
    bound: object

    def __str__(self):
        return f"{self.kind} {self.index}: got {self.actual}, required {self.bound}"


def _exceeds(a, b, tol) -> bool:
    """a > b, exactly or with slack ``tol``."""
    return a - b > tol


def validate_classification(c, setting: Setting, tol=0) -> Violation | None:
    """Return ``None`` when ``c`` is a valid classification, else the first violation.

    Checks run in the order entries, rows, columns.  With ``tol=0`` (the
    default) comparisons are exact.
    """
    c = np.asarray(c, dtype=object)
    if c.shape != setting.shape:
        raise DimensionMismatch(f"expected shape {setting.shape}, got {c.shape}")
    s = setting.scale
    if setting.variant == STANDARD:
        for (j, t), v in np.ndenumerate(c):
            if _exceeds(0, v, tol) or _exceeds(v, 1, tol):
                return Violation("entry", (j, t), v, "[0, 1]")
    for j in range(setting.m):
        total = sum(c[j])
        if abs(total - s) > tol:
            return Violation("row", j, total, f"= {s}")
    for t in range(setting.p):
        total = sum(c[:, t])
        if s >= 0 and _exceeds(s, total, tol):
            return Violation("column", t, total, f">= {s}")
        if s < 0 and _exceeds(total, s, tol):
            return Violation("column", t, total, f"<= {s}")
    return None


def is_valid(c, setting: Setting, tol=0) -> bool:
    return validate_classification(c, setting, tol) is None


def standard_setting(n: int, m: int, p: int) -> Setting:
    return Setting(n, m, p)


@dataclass(frozen=True, eq=False)
class Profile:
    """``n`` valid classifications over one :class:`Setting`.

    ``degrees[i, j, t]`` is the degree to which voter ``i`` puts object
    ``j`` in category ``t``.  The array is read-only.
    """

    degrees: np.ndarray
    setting: Setting

    def __post_init__(self):
        deg = as_matrix(self.degrees)
        if deg.ndim != 3:
            raise DimensionMismatch(f"profile must be rank 3, got rank {deg.ndim}")
        n, m, p = deg.shape
        if (n, m, p) != (self.setting.n, self.setting.m, self.setting.p):
            raise DimensionMismatch(
                f"profile shape {deg.shape} does not match setting "
                f"{(self.setting.n, self.setting.m, self.setting.p)}"
            )
        for i in range(n):
            v = validate_classification(deg[i], self.setting)
            if v is not None:
                raise InvalidClassification(v, voter=i)
        deg.flags.writeable = False
        object.__setattr__(self, "degrees", deg)

    @classmethod
    def from_voters(cls, voters: Iterable, setting: Setting | None = None) -> "Profile":
        """Stack voter matrices; the standard setting is inferred if omitted."""
        deg = as_matrix([as_matrix(v) for v in voters])
        if setting is None:
            n, m, p = deg.shape
            setting = Setting(n, m, p)
        return cls(deg, setting)

    @property
    def n(self) -> int:
        return self.setting.n

    @property
    def voters(self) -> list[np.ndarray]:
        return [self.degrees[i] for i in range(self.n)]

    def __eq__(self, other):
        if not isinstance(other, Profile):
            return NotImplemented
        return self.setting == other.setting and np.array_equal(self.degrees, other.degrees)

    def __hash__(self):
        return hash((self.setting, tuple(self.degrees.flat)))

    def __repr__(self):
        return f"Profile(n={self.n}, m={self.setting.m}, p={self.setting.p})"


def restrict(profile: Profile, j: int) -> np.ndarray:
    """The ``n x p`` block of what every voter says about object ``j``."""
    if not 0 <= j < profile.setting.m:
        raise IndexError(f"object index {j} out of range for m={profile.setting.m}")
    return profile.degrees[:, j, :].copy()


def assemble(columns: Sequence[np.ndarray], setting: Setting) -> Profile:
    """Inverse of :func:`restrict` over all objects."""
    deg = np.stack([np.asarray(col, dtype=object) for col in columns], axis=1)
    return Profile(deg, setting)


def _check_permutation(sigma: Sequence[int], n: int) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(n)):
        raise InvalidPermutation(f"{sigma} is not a permutation of range({n})")
    return sigma


def permute_voters(profile: Profile, sigma: Sequence[int]) -> Profile:
    """Voter ``i`` of the result is voter ``sigma[i]`` of ``profile``."""
    sigma = _check_permutation(sigma, profile.n)
    return Profile(profile.degrees[list(sigma)], profile.setting)


def is_surjective(assignment: Sequence[int], p: int) -> bool:
    return set(assignment) == set(range(p))


def embed_crisp(assignment: Sequence[int], p: int) -> np.ndarray:
    """One-hot ``m x p`` matrix of a surjective crisp classification."""
    assignment = tuple(int(a) for a in assignment)
    if not is_surjective(assignment, p):
        raise NotSurjective(f"{assignment} does not hit every one of {p} categories")
    out = np.full((len(assignment), p), Fraction(0), dtype=object)
    for j, t in enumerate(assignment):
        out[j, t] = Fraction(1)
    return out


@dataclass(frozen=True)
class Weights:
    """Nonnegative voter weights summing exactly to one."""

    w: tuple[Fraction, ...] = field()

    def __init__(self, w):
        values = tuple(to_fraction(x) for x in w)
        if not values:
            raise InvalidWeights("empty weight vector")
        if any(x < 0 or x > 1 for x in values):
            raise InvalidWeights(f"weights must lie in [0, 1]: {values}")
        if sum(values) != 1:
            raise InvalidWeights(f"weights sum to {sum(values)}, not 1")
        object.__setattr__(self, "w", values)

    @classmethod
    def uniform(cls, n: int) -> "Weights":
        return cls([Fraction(1, n)] * n)

    @classmethod
    def from_floats(cls, xs, denominator: int = MAX_DENOMINATOR) -> "Weights":
        """Snap approximately-normalized floats onto a grid of step ``1/denominator``.

        Negative values are clipped to zero and the largest entry absorbs the
        rounding residue, so the result sums to one exactly.
        """
        xs = np.clip(np.asarray(xs, dtype=float), 0.0, None)
        if xs.sum() <= 0:
            raise InvalidWeights("all weights are zero")
        ks = [int(round(v)) for v in xs / xs.sum() * denominator]
        k = int(np.argmax(ks))
        ks[k] += denominator - sum(ks)
        return cls([Fraction(v, denominator) for v in ks])

    def __len__(self):
        return len(self.w)

    def __iter__(self):
        return iter(self.w)

    def __getitem__(self, i):
        return self.w[i]

    @property
    def degenerate(self) -> bool:
        return any(x == 1 for x in self.w)

    @property
    def dictator(self) -> int | None:
        for i, x in enumerate(self.w):
            if x == 1:
                return i
        return None

    def __str__(self):
        return ",".join(str(x) for x in self.w)
