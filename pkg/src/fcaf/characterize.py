"""Recover weighted-arithmetic-mean weights from a black-box aggregator.

The probes are profiles in which every voter classifies the first ``p``
objects by a permutation.  If voter ``i`` is the only one putting object
``x`` into category ``t``, a linear aggregator returns exactly ``w_i^t`` at
entry ``(x, t)``.  One probe per voter (voter ``i`` on the identity, all
others on the cyclic shift) reads off row ``i`` of the per-category weight
matrix; a second family with the shifts moved by one repeats every reading
as a consistency check.  For n = 2, m = p = 3 the first probe of voter 0 is
the classic pair identity / cycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy
from scipy.optimize import minimize

from .aggregate import Aggregator, wam_aggregate
from .axioms import Sampled, check_output_validity, check_zero_unanimity, plain_profile
from .errors import FcafError, InvalidWeights, NonAdditive, PreconditionFailed, WrongSetting
from .model import Profile, Setting, Weights, embed_crisp, is_exact

FIT_TOL = 1e-9


@dataclass(frozen=True)
class WeightMatrix:
    """Entry ``(i, t)`` is voter ``i``'s weight in category ``t``."""

    w: np.ndarray

    @property
    def exact(self) -> bool:
        return is_exact(self.w)

    def column(self, t: int) -> tuple:
        return tuple(self.w[:, t])

    def column_sums(self) -> tuple:
        return tuple(self.w.sum(axis=0))


@dataclass(frozen=True)
class Unequal:
    """Categories ``t`` and ``t2`` disagree on voter ``voter``'s weight."""

    categories: tuple[int, int]
    voter: int
    values: tuple


@dataclass
class FitReport:
    weights: Weights
    max_residual: object
    is_wam: bool
    witness: Profile | None
    method: str
    in_linear_regime: bool
    weight_matrix: WeightMatrix | None = None
    unconstrained_weights: tuple | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def degenerate(self) -> bool:
        return self.weights.degenerate


def shift(k: int, p: int) -> tuple[int, ...]:
    """Cyclic shift sending object ``j`` to category ``(j + k) mod p``."""
    return tuple((j + k) % p for j in range(p))


def probe_profile(n: int, m: int, assignment: Sequence[Sequence[int]], p: int | None = None) -> Profile:
    """Profile whose voter ``i`` classifies the first ``p`` objects by ``assignment[i]``.

    ``assignment[i][j]`` is the category voter ``i`` gives object ``j``.  With
    ``m > p`` the remaining objects get the uniform row ``1/p``.
    """
    p = m if p is None else p
    if len(assignment) != n:
        raise ValueError(f"need one permutation per voter, got {len(assignment)} for n={n}")
    voters = []
    for perm in assignment:
        if sorted(perm) != list(range(p)):
            raise ValueError(f"{tuple(perm)} is not a permutation of range({p})")
        c = embed_crisp(perm, p)
        if m > p:
            filler = np.full((m - p, p), Fraction(1, p), dtype=object)
            c = np.vstack([c, filler])
        voters.append(c)
    return Profile(np.array(voters, dtype=object), Setting(n, m, p))


def _probes(setting: Setting):
    """Yields ``(voter, lone_shift, profile)`` for both probe families."""
    n, m, p = setting.n, setting.m, setting.p
    for lone, bloc in ((0, 1), (1, 2 % p if p > 2 else 0)):
        for i in range(n):
            perms = [shift(lone if k == i else bloc, p) for k in range(n)]
            c = probe_profile(n, m, perms, p)
            if c.setting != setting:
                c = Profile(c.degrees, setting)
            yield i, lone, c


def _same(a, b, tol) -> bool:
    if tol == 0:
        return a == b
    return abs(a - b) <= tol


def recover_weight_matrix(agg: Aggregator, tol: float = FIT_TOL,
                          check_validity: bool = True) -> WeightMatrix:
    """Read the per-category weight matrix off the aggregator's probe outputs.

    The probe outputs are first checked for zero unanimity and, unless
    ``check_validity`` is off, for validity; :class:`PreconditionFailed`
    carries the failing report.  Readings that disagree between the two
    probe families, or columns that do not sum to one, raise
    :class:`NonAdditive`.

    Validity on the probes already forces equal columns, so an aggregator
    with genuinely different per-category weights can only be read with
    ``check_validity=False``.
    """
    s = agg.setting
    if s.variant != "standard":
        raise WrongSetting("weight recovery runs in the standard setting")
    probes = list(_probes(s))
    profiles = [c for _, _, c in probes]
    checks = (check_output_validity, check_zero_unanimity) if check_validity else (check_zero_unanimity,)
    for check in checks:
        report = check(agg, profiles)
        if not report.satisfied:
            raise PreconditionFailed(report)

    n, p = s.n, s.p
    W = np.empty((n, p), dtype=object)
    outputs = {(i, lone): agg(c) for i, lone, c in probes}
    exact = all(is_exact(o) for o in outputs.values())
    tol = 0 if exact else tol
    for i in range(n):
        first, second = outputs[(i, 0)], outputs[(i, 1)]
        for x in range(p):
            W[i, x] = first[x, x]
        for x in range(p):
            t = (x + 1) % p
            if not _same(second[x, t], W[i, t], tol):
                raise NonAdditive(
                    f"voter {i}, category {t}: probes read {W[i, t]} and {second[x, t]}")
    sums = W.sum(axis=0)
    for t, total in enumerate(sums):
        if not _same(total, 1, tol):
            raise NonAdditive(f"category {t} weights sum to {total}, not 1")
    if n > 1:
        for i in range(n):
            first = outputs[(i, 0)]
            for x in range(p):
                t = (x + 1) % p
                if not _same(first[x, t], 1 - W[i, t], tol):
                    raise NonAdditive(
                        f"bloc reading at object {x}, category {t} is {first[x, t]}, "
                        f"expected {1 - W[i, t]}")
    return WeightMatrix(W)


def check_weight_equality(wm: WeightMatrix, tol: float = FIT_TOL) -> Weights | Unequal:
    """Common weight vector if every category column agrees, else the first disagreement."""
    tol = 0 if wm.exact else tol
    W = wm.w
    n, p = W.shape
    for t in range(1, p):
        for i in range(n):
            if not _same(W[i, 0], W[i, t], tol):
                return Unequal((0, t), i, (W[i, 0], W[i, t]))
    col = W[:, 0]
    if wm.exact:
        return Weights(col)
    return Weights.from_floats([float(np.mean([float(v) for v in W[i]])) for i in range(n)])


def probe_system(assignment: Sequence[Sequence[int]], p: int):
    """Linear equations on the unknown per-category weights implied by one probe.

    Unknown ``w[i][t]`` is voter ``i``'s weight in category ``t``.  Each
    category contributes ``sum_i w[i][t] = 1`` (per-category normalization)
    and each object ``x`` contributes ``sum_i w[i][assignment[i][x]] = 1``
    (the output row for ``x`` sums to one).  Returns ``(equations, symbols)``.
    """
    n = len(assignment)
    w = [[sympy.Symbol(f"w_{i + 1}^{t + 1}") for t in range(p)] for i in range(n)]
    eqs = [sympy.Eq(sum(w[i][t] for i in range(n)), 1) for t in range(p)]
    for x in range(p):
        eqs.append(sympy.Eq(sum(w[i][assignment[i][x]] for i in range(n)), 1))
    return eqs, w


def probe_system_forces_equal_weights(assignment: Sequence[Sequence[int]], p: int) -> bool:
    """True when every solution of :func:`probe_system` has ``w[i][t]`` constant in ``t``."""
    eqs, w = probe_system(assignment, p)
    flat = [v for row in w for v in row]
    solutions = sympy.linsolve(eqs, flat)
    if not solutions:
        return False
    (sol,) = solutions
    values = dict(zip(flat, sol))
    return all(sympy.simplify(values[row[t]] - values[row[0]]) == 0
               for row in w for t in range(1, p))


def _design(agg: Aggregator, profiles):
    rows, ys = [], []
    for c in profiles:
        out = agg(c)
        for j in range(agg.setting.m):
            for t in range(agg.setting.p):
                rows.append([float(v) for v in c.degrees[:, j, t]])
                ys.append(float(out[j, t]))
    return np.array(rows), np.array(ys)


def _least_squares(agg: Aggregator, profiles):
    """Simplex-constrained and sum-constrained-only least-squares weight fits."""
    A, y = _design(agg, profiles)
    n = A.shape[1]
    res = minimize(lambda w: np.sum((A @ w - y) ** 2), np.full(n, 1.0 / n),
                   jac=lambda w: 2 * A.T @ (A @ w - y), method="SLSQP",
                   bounds=[(0.0, 1.0)] * n,
                   constraints=[{"type": "eq", "fun": lambda w: np.sum(w) - 1.0,
                                 "jac": lambda w: np.ones_like(w)}],
                   options={"ftol": 1e-15, "maxiter": 500})
    constrained = np.clip(res.x, 0.0, None)
    kkt = np.block([[2 * A.T @ A, np.ones((n, 1))], [np.ones((1, n)), np.zeros((1, 1))]])
    rhs = np.concatenate([2 * A.T @ y, [1.0]])
    free = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:n]
    return constrained, free, A, y


def _residual(agg: Aggregator, weights: Weights, profiles):
    """Worst entrywise gap between ``agg`` and the fitted WAM; exact when both are rational."""
    worst, witness, exact = None, None, True
    for c in profiles:
        out = agg(c)
        fitted = wam_aggregate(weights, c)
        exact &= is_exact(out)
        for a, b in zip(out.flat, fitted.flat):
            d = abs(a - b) if is_exact([a]) else abs(float(a) - float(b))
            if worst is None or d > worst:
                worst, witness = d, c
    return worst, witness, exact


def fit_wam(agg: Aggregator, source: Sampled = Sampled(count=50), tol: float = FIT_TOL) -> FitReport:
    """Decide whether ``agg`` is a weighted arithmetic mean.

    Weights come from the probe recovery when it succeeds and the columns
    agree; otherwise from a least-squares fit over ``source``.  The residual
    is measured on a fresh sample (seed + 1) of the same size.  Rational
    aggregators need a residual of exactly zero; others ``<= tol``.
    """
    s = agg.setting
    notes = []
    in_regime = s.m >= 3 and s.m >= s.p >= 2
    if not in_regime:
        notes.append("outside the m >= 3 regime of the characterization")
    wm = None
    weights = None
    unconstrained = None
    method = "probe"
    try:
        wm = recover_weight_matrix(agg, tol)
        verdict = check_weight_equality(wm, tol)
        if isinstance(verdict, Unequal):
            notes.append(f"per-category weights differ: categories {verdict.categories}, "
                         f"voter {verdict.voter}, values {verdict.values}")
        else:
            weights = verdict
    except (FcafError, InvalidWeights) as e:
        notes.append(f"probe recovery failed: {e}")
    if weights is None:
        method = "least-squares"
        profiles = [plain_profile(s, source.seed, k, source.strategy) for k in range(source.count)]
        constrained, free, A, y = _least_squares(agg, profiles)
        weights = Weights.from_floats(constrained)
        rss_c = float(np.sum((A @ constrained - y) ** 2))
        rss_f = float(np.sum((A @ free - y) ** 2))
        if np.any(free < -tol) and rss_f < 0.5 * rss_c:
            unconstrained = tuple(float(v) for v in free)
            notes.append("an unconstrained fit with negative weights explains the data better")
    fresh = [plain_profile(s, source.seed + 1, k, source.strategy) for k in range(source.count)]
    residual, witness, exact = _residual(agg, weights, fresh)
    is_wam = residual == 0 if exact else residual <= tol
    if weights.degenerate:
        notes.append(f"degenerate weights: voter {weights.dictator} dictates")
    return FitReport(weights, residual, bool(is_wam), witness, method, in_regime, wm,
                     unconstrained, notes)
