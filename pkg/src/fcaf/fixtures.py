"""Built-in aggregators, well-behaved and deliberately broken.

Each fixture is constructed to satisfy or fail particular axioms so the
checkers have something to find.  :func:`builtin_fixtures` returns the ones
that make sense for a given setting.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction

import numpy as np

from .aggregate import Aggregator, arithmetic_mean, mean, odd_h, per_entry_power_rule, wam
from .model import STANDARD, Profile, Setting, Weights


def dictator(i: int, setting: Setting) -> Aggregator:
    w = [0] * setting.n
    w[i] = 1
    return wam(w, setting)


def cross_object(setting: Setting) -> Aggregator:
    """Object 0 gets the voters' mean opinion about object 1; others get their own mean."""

    def fn(c: Profile):
        out = arithmetic_mean(c)
        out[0] = out[1]
        return out

    return Aggregator(setting, fn, "fixture:cross-object")


def per_object_weights(setting: Setting) -> Aggregator:
    """WAM whose weight vector depends on the object (voter 0 dictates odd objects)."""
    n = setting.n

    def fn(c: Profile):
        out = arithmetic_mean(c)
        for j in range(1, setting.m, 2):
            out[j] = c.degrees[0, j]
        return out

    if n < 2:
        raise ValueError("per-object weights need at least two voters to differ")
    return Aggregator(setting, fn, "fixture:per-object")


def per_category_wam(W, setting: Setting) -> Aggregator:
    """Entry (j, t) is ``sum_i W[i][t] c_i(x_j)_t``: one weight column per category."""
    W = np.array([[Fraction(x) for x in row] for row in W], dtype=object)
    if W.shape != (setting.n, setting.p):
        raise ValueError(f"weight matrix must be {setting.n} x {setting.p}")

    def fn(c: Profile):
        out = np.empty(setting.shape, dtype=object)
        for j in range(setting.m):
            for t in range(setting.p):
                out[j, t] = sum(W[i, t] * c.degrees[i, j, t] for i in range(setting.n))
        return out

    return Aggregator(setting, fn, "fixture:per-category")


def default_per_category_weights(setting: Setting):
    """Columns alternate between uniform weights and voter 0 dictating."""
    n, p = setting.n, setting.p
    W = [[Fraction(0)] * p for _ in range(n)]
    for t in range(p):
        for i in range(n):
            if t % 2 == 0:
                W[i][t] = Fraction(1, n)
            else:
                W[i][t] = Fraction(1 if i == 0 else 0)
    return W


def constant_uniform(setting: Setting) -> Aggregator:
    """Ignores the profile and spreads every object evenly: ``1/p`` everywhere."""
    out = np.full(setting.shape, setting.scale / setting.p, dtype=object)
    return Aggregator(setting, lambda c: out.copy(), "fixture:constant-uniform")


def additive_noise(setting: Setting, eps=Fraction(1, 64)) -> Aggregator:
    """Arithmetic mean plus a zero-sum perturbation derived from a hash of the profile.

    Row sums are preserved; every entry moves by ``eps * (1 - 1/p)`` or
    ``-eps / p``, so a unanimous zero never survives.
    """
    eps = Fraction(eps)
    p = setting.p

    def fn(c: Profile):
        out = arithmetic_mean(c)
        digest = hashlib.sha256(repr(tuple(c.degrees.flat)).encode()).digest()
        for j in range(setting.m):
            k = digest[j % len(digest)] % p
            out[j] = out[j] - eps / p
            out[j, k] += eps
        return out

    return Aggregator(setting, fn, "fixture:additive-noise")


def extrapolating(setting: Setting) -> Aggregator:
    """``2 c_1 - c_2``: row sums stay at s but entries escape the voter range."""
    if setting.n < 2:
        raise ValueError("extrapolation needs two voters")

    def fn(c: Profile):
        return 2 * c.degrees[0] - c.degrees[1]

    return Aggregator(setting, fn, "fixture:extrapolating")


def builtin_fixtures(setting: Setting) -> dict[str, Aggregator]:
    """Every built-in aggregator applicable to ``setting``, keyed by short name."""
    n = setting.n
    out = {
        "mean": mean(setting),
        "dictator": dictator(0, setting),
        "constant-uniform": constant_uniform(setting),
        "cross-object": cross_object(setting),
        "additive-noise": additive_noise(setting),
        "per-category": per_category_wam(default_per_category_weights(setting), setting),
        "entrywise-oddh:3": per_entry_power_rule(3, setting),
    }
    if n >= 2:
        w = [Fraction(1, 2 * (n - 1))] * n
        w[0] = Fraction(1, 2)
        out["wam-skewed"] = wam(Weights(w), setting)
        out["per-object"] = per_object_weights(setting)
        out["extrapolating"] = extrapolating(setting)
    if setting.m == setting.p == 2 and setting.variant == STANDARD:
        out["oddh:3"] = odd_h(3, setting)
    return out
