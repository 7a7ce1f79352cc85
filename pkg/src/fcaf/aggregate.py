"""Aggregation rules: weighted arithmetic means and the odd-h family for m = p = 2.

Every rule is exposed twice: as a plain function ``rule(..., profile)`` and
wrapped in an :class:`Aggregator` handle that the axiom checkers and weight
recovery treat as a black box.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np

from .errors import EvenExponent, InvalidH, LengthMismatch, WrongSetting
from .model import STAR, STANDARD, Profile, Setting, Weights, to_fraction

HALF = Fraction(1, 2)

#: Tolerance for comparisons that involve a power-mean root.
POWER_MEAN_TOL = 1e-12


@dataclass(frozen=True)
class Aggregator:
    """Opaque profile -> classification map plus the setting it is declared for.

    ``descriptor`` is a short rule string such as ``"wam:1/2,0,1/2"``,
    ``"mean"`` or ``"oddh:3"``; it is what reports print.  Outputs are not
    assumed to be valid classifications.
    """

    setting: Setting
    fn: Callable[[Profile], np.ndarray]
    descriptor: str = "external"

    def __call__(self, profile: Profile) -> np.ndarray:
        out = np.asarray(self.fn(profile), dtype=object)
        if out.shape != self.setting.shape:
            raise WrongSetting(
                f"{self.descriptor} returned shape {out.shape}, expected {self.setting.shape}"
            )
        return out


def _weighted_sum(weights: Sequence, degrees: np.ndarray) -> np.ndarray:
    out = np.full(degrees.shape[1:], Fraction(0), dtype=object)
    for w_i, c_i in zip(weights, degrees):
        if w_i:
            out = out + w_i * c_i
    return out


def wam_aggregate(w: Weights, profile: Profile) -> np.ndarray:
    """Weighted arithmetic mean: entry (j, t) is ``sum_i w_i c_i(x_j)_t``."""
    if len(w) != profile.n:
        raise LengthMismatch(f"{len(w)} weights for {profile.n} voters")
    return _weighted_sum(w.w, profile.degrees)


def arithmetic_mean(profile: Profile) -> np.ndarray:
    return wam_aggregate(Weights.uniform(profile.n), profile)


def star_wam(w: Weights, profile: Profile) -> np.ndarray:
    """WAM in the scale-s setting; identical arithmetic, different validity policy."""
    if profile.setting.variant != STAR:
        raise WrongSetting("star_wam needs a star-variant profile")
    return wam_aggregate(w, profile)


def _iroot(k: int, q: int) -> int | None:
    """Exact integer q-th root of ``k >= 0`` or None."""
    if k < 2:
        return k
    x = 1 << -(-k.bit_length() // q)
    while True:
        y = ((q - 1) * x + k // x ** (q - 1)) // q
        if y >= x:
            break
        x = y
    return x if x**q == k else None


def _exact_root(v: Fraction, q: int) -> Fraction | None:
    num = _iroot(abs(v.numerator), q)
    den = _iroot(v.denominator, q)
    if num is None or den is None:
        return None
    return Fraction(num, den) if v >= 0 else -Fraction(num, den)


def odd_power_mean(q: int, xs: Sequence):
    """Sign-preserving ``(mean(x_i ** q)) ** (1/q)`` for odd ``q``.

    Returns a Fraction whenever the mean of powers has a rational q-th root
    (in particular for ``q == 1``), otherwise a float computed at 40 digits.
    """
    if q < 1 or q % 2 == 0:
        raise EvenExponent(f"exponent must be a positive odd integer, got {q}")
    xs = [to_fraction(x) for x in xs]
    mean = sum(x**q for x in xs) / len(xs)
    root = _exact_root(mean, q)
    if root is not None:
        return root
    with mpmath.workdps(40):
        r = mpmath.root(mpmath.mpf(abs(mean.numerator)) / mean.denominator, q)
        value = float(r)
    return value if mean > 0 else -value


class HFunction:
    """An odd function ``h`` on ``[-1/2, 1/2]^n`` with ``h(1/2, ..., 1/2) = 1/2``."""

    descriptor = "h"

    def __call__(self, xs: Sequence):
        raise NotImplementedError


class WeightedSum(HFunction):
    def __init__(self, weights: Weights):
        self.weights = weights
        self.descriptor = f"wsum:{weights}"

    def __call__(self, xs):
        if len(xs) != len(self.weights):
            raise LengthMismatch(f"{len(self.weights)} weights for {len(xs)} inputs")
        return sum(w * to_fraction(x) for w, x in zip(self.weights, xs))


class OddPowerMean(HFunction):
    def __init__(self, q: int):
        if q < 1 or q % 2 == 0:
            raise EvenExponent(f"exponent must be a positive odd integer, got {q}")
        self.q = q
        self.descriptor = f"oddh:{q}"

    def __call__(self, xs):
        return odd_power_mean(self.q, xs)


def _close(a, b, tol=POWER_MEAN_TOL) -> bool:
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a == b
    return abs(float(a) - float(b)) <= tol


class CustomH(HFunction):
    """User-supplied ``h``, spot-checked for oddness, range and the fixed point.

    The checks draw ``samples`` random rational points from ``[-1/2, 1/2]^n``
    and raise :class:`InvalidH` on the first failure.
    """

    def __init__(self, fn: Callable, n: int, samples: int = 256, seed: int = 0,
                 descriptor: str = "custom"):
        self.fn = fn
        self.n = n
        self.descriptor = descriptor
        self._spot_check(samples, seed)

    def _spot_check(self, samples, seed):
        top = self.fn([HALF] * self.n)
        if not _close(top, HALF):
            raise InvalidH(f"h(1/2, ..., 1/2) = {top}, expected 1/2")
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            xs = [Fraction(int(k), 2**16) - HALF for k in rng.integers(0, 2**16 + 1, self.n)]
            a = self.fn(xs)
            b = self.fn([-x for x in xs])
            if not _close(a, -b):
                raise InvalidH(f"h is not odd at {xs}: h(x)={a}, h(-x)={b}")
            if not -HALF - POWER_MEAN_TOL <= a <= HALF + POWER_MEAN_TOL:
                raise InvalidH(f"h({xs}) = {a} leaves [-1/2, 1/2]")

    def __call__(self, xs):
        return self.fn(list(xs))


def _require_2x2(setting: Setting):
    if setting.m != 2 or setting.p != 2:
        raise WrongSetting(f"the odd-h family needs m = p = 2, got m={setting.m}, p={setting.p}")


def h_aggregate_2x2(h: HFunction, profile: Profile) -> np.ndarray:
    """Output ``(x_j)_k = h(c_1(x_j)_k - 1/2, ..., c_n(x_j)_k - 1/2) + 1/2``."""
    _require_2x2(profile.setting)
    return per_entry_h(h, profile)


def per_entry_h(h: HFunction, profile: Profile) -> np.ndarray:
    """Apply the shifted ``h`` rule entry by entry for any m, p.

    Only m = p = 2 guarantees a valid classification; for larger settings
    this is the counterexample rule showing nonlinear h breaks row sums.
    """
    deg = profile.degrees
    _, m, p = deg.shape
    out = np.empty((m, p), dtype=object)
    for j in range(m):
        for t in range(p):
            out[j, t] = h([c - HALF for c in deg[:, j, t]]) + HALF
    return out


def wam(w, setting: Setting) -> Aggregator:
    weights = w if isinstance(w, Weights) else Weights(w)
    if len(weights) != setting.n:
        raise LengthMismatch(f"{len(weights)} weights for n={setting.n}")
    fn = (lambda c: star_wam(weights, c)) if setting.variant == STAR else (
        lambda c: wam_aggregate(weights, c))
    return Aggregator(setting, fn, f"wam:{weights}")


def mean(setting: Setting) -> Aggregator:
    return Aggregator(setting, arithmetic_mean, "mean")


def odd_h(q: int, setting: Setting) -> Aggregator:
    """The m = p = 2 rule built from the odd power mean of exponent ``q``."""
    _require_2x2(setting)
    if setting.variant != STANDARD:
        raise WrongSetting("the odd-h family is defined for the standard setting")
    h = OddPowerMean(q)
    return Aggregator(setting, lambda c: h_aggregate_2x2(h, c), h.descriptor)


def h_rule(h: HFunction, setting: Setting) -> Aggregator:
    _require_2x2(setting)
    return Aggregator(setting, lambda c: h_aggregate_2x2(h, c), h.descriptor)


def per_entry_power_rule(q: int, setting: Setting) -> Aggregator:
    """Odd power mean applied per entry in any setting (invalid beyond m = 2)."""
    h = OddPowerMean(q)
    return Aggregator(setting, lambda c: per_entry_h(h, c), f"entrywise-oddh:{q}")


def parse_rule(rule: str, setting: Setting) -> Aggregator:
    """Build an aggregator from ``wam:<w1>,<w2>,...``, ``mean`` or ``oddh:<q>``."""
    kind, _, arg = rule.partition(":")
    kind = kind.strip().lower()
    if kind == "wam":
        return wam([to_fraction(x) for x in arg.split(",")], setting)
    if kind == "mean":
        return mean(setting)
    if kind == "oddh":
        return odd_h(int(arg), setting)
    if kind == "entrywise-oddh":
        return per_entry_power_rule(int(arg), setting)
    if kind == "fixture":
        from .fixtures import builtin_fixtures

        fixtures = builtin_fixtures(setting)
        if arg not in fixtures:
            raise ValueError(f"unknown or inapplicable fixture {arg!r}; have {sorted(fixtures)}")
        return fixtures[arg]
    raise ValueError(f"unknown rule {rule!r}")
