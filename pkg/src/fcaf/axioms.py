"""Black-box axiom checkers.

Every ``check_*`` function takes an :class:`~fcaf.aggregate.Aggregator` and a
profile source (either :class:`Sampled` or an explicit sequence of
profiles) and returns an :class:`AxiomReport`.  The checkers are
falsifiers: ``satisfied`` means no counterexample turned up among the trial
profiles, ``violated`` comes with a witness that :meth:`AxiomReport.replay`
reproduces.

Sampled trials are deterministic.  Trial ``k`` of stream ``s`` draws from
``SeedSequence(seed, spawn_key=(s, k))`` so different checkers run on
overlapping profile sets: the zero-unanimity profiles of trial ``k`` are
also checked for unanimity and fuzzy consensus, which makes the implication
chain between those three axioms hold trial by trial.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .aggregate import Aggregator
from .errors import PairGenerationFailed, WrongSetting
from .model import STAR, Profile, Setting, is_exact, permute_voters, validate_classification
from .sample import BIRKHOFF, DIRICHLET, VERTEX, _blend_factor, sample_classification, simplex_point

#: Tolerance used whenever an output contains floats.
FLOAT_TOL = 1e-12
DEFAULT_TRIALS = 1000
MAX_COMPLETION_ATTEMPTS = 10_000

OUTPUT_VALIDITY = "output-validity"
INDEPENDENCE = "independence"
SYMMETRY = "symmetry"
UNANIMITY = "unanimity"
ZERO_UNANIMITY = "zero-unanimity"
FUZZY_CONSENSUS = "fuzzy-consensus"
NON_DICTATORSHIP = "non-dictatorship"
ANONYMITY = "anonymity"
K_ALLOCATION = "k-allocation"

SATISFIED = "satisfied"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"

_PLAIN, _PLANTED, _ZERO, _PAIR, _TWIN, _PERM = range(6)
_STRATEGY_CYCLE = (BIRKHOFF, DIRICHLET, VERTEX)


@dataclass(frozen=True)
class Sampled:
    """Draw ``count`` seeded trial profiles.

    With ``strategy=None`` trials cycle through Birkhoff mixing, Dirichlet
    rows with repair and crisp vertices.
    """

    count: int = DEFAULT_TRIALS
    seed: int = 0
    strategy: str | None = None


@dataclass(frozen=True)
class Witness:
    profiles: tuple[Profile, ...]
    objects: tuple[int, ...] = ()
    category: int | None = None
    values: tuple = ()
    permutation: tuple[int, ...] | None = None
    voter: int | None = None
    note: str = ""


@dataclass
class AxiomReport:
    axiom: str
    verdict: str
    trials: int
    seed: int | None
    descriptor: str
    witness: Witness | None = None
    refuted: dict[int, Witness] = field(default_factory=dict)
    candidates: tuple[int, ...] = ()
    notes: tuple[str, ...] = ()
    setting: Setting | None = None

    @property
    def satisfied(self) -> bool:
        return self.verdict == SATISFIED

    @property
    def violated(self) -> bool:
        return self.verdict == VIOLATED

    @property
    def inconclusive(self) -> bool:
        return self.verdict == INCONCLUSIVE

    def replay(self, agg: Aggregator) -> bool:
        """Re-evaluate ``agg`` on the stored witness(es); True if the finding reproduces.

        For non-dictatorship this replays every per-voter refutation.
        """
        if self.axiom == NON_DICTATORSHIP:
            return bool(self.refuted) and all(
                _REPLAY[NON_DICTATORSHIP](agg, w) for w in self.refuted.values())
        if self.witness is None:
            return False
        return _REPLAY[self.axiom](agg, self.witness)

    def to_dict(self) -> dict:
        from .documents import report_to_dict

        return report_to_dict(self)

    def summary(self) -> str:
        line = f"{self.axiom}: {self.verdict} ({self.trials} trials, seed={self.seed})"
        if self.candidates:
            line += f"; unrefuted dictator candidates {list(self.candidates)}"
        if self.witness is not None and self.witness.note:
            line += f"; {self.witness.note}"
        for note in self.notes:
            line += f"; {note}"
        return line


# ---------------------------------------------------------------------------
# numeric helpers


def _tol_for(*arrays) -> float | int:
    return 0 if all(is_exact(a) for a in arrays) else FLOAT_TOL


def _differs(a, b) -> bool:
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    tol = _tol_for(a, b)
    return any(abs(x - y) > tol for x, y in zip(a.flat, b.flat))


def _trial_rng(seed: int, stream: int, k: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream, k)))


def _strategy(strategy: str | None, k: int) -> str:
    return strategy if strategy is not None else _STRATEGY_CYCLE[k % len(_STRATEGY_CYCLE)]


# ---------------------------------------------------------------------------
# trial profile generators


@lru_cache(maxsize=8192)
def plain_profile(setting: Setting, seed: int, k: int, strategy: str | None = None) -> Profile:
    rng = _trial_rng(seed, _PLAIN, k)
    st = _strategy(strategy, k)
    voters = [sample_classification(setting, rng, st) for _ in range(setting.n)]
    return Profile(np.array(voters, dtype=object), setting)


def _complete(frozen: dict, m: int, p: int, rng, base=None) -> np.ndarray:
    """Fill the rows not in ``frozen`` so the unit-scale matrix is valid.

    Free rows are drawn at random and blended toward ``base`` (a feasible
    completion; a default one is built when omitted) by the smallest factor
    restoring feasibility.  Row sums are always 1; for m = p the last free
    row is forced by the column sums.
    """
    free = [j for j in range(m) if j not in frozen]
    out = np.empty((m, p), dtype=object)
    F = np.full(p, Fraction(0), dtype=object)
    for j, row in frozen.items():
        out[j] = row
        F = F + np.asarray(row, dtype=object)
    k = len(free)
    if k == 0:
        return out
    if base is None:
        if m == p:
            base = np.array([(1 - F) / k] * k, dtype=object)
        else:
            base = np.full((k, p), Fraction(1, p), dtype=object)
    if m == p:
        target = 1 - F
        prop = np.array([simplex_point(p, rng) for _ in range(k - 1)], dtype=object).reshape(k - 1, p)
        prop_last = target - prop.sum(axis=0)
        floor = [min(0, b) for b in base[-1]]
        lam = _blend_factor(prop_last, base[-1], floor)
        rows = (1 - lam) * prop + lam * base[:-1]
        rows = np.vstack([rows, (target - rows.sum(axis=0))[None, :]])
    else:
        prop = np.array([simplex_point(p, rng) for _ in range(k)], dtype=object)
        base_cols = base.sum(axis=0)
        floor = [min(1 - f, b) for f, b in zip(F, base_cols)]
        lam = _blend_factor(prop.sum(axis=0), base_cols, floor)
        rows = (1 - lam) * prop + lam * base
    for r, j in enumerate(free):
        out[j] = rows[r]
    return out


@lru_cache(maxsize=8192)
def planted_profile(setting: Setting, seed: int, k: int, zero: bool) -> tuple[Profile, int, int, Fraction]:
    """Profile in which every voter gives object ``x`` degree ``r`` in category ``t``.

    Returns ``(profile, x, t, r)``; ``r = 0`` when ``zero`` is set.
    """
    rng = _trial_rng(seed, _ZERO if zero else _PLANTED, k)
    m, p = setting.m, setting.p
    x = int(rng.integers(m))
    t = int(rng.integers(p))
    if zero:
        r = Fraction(0)
    else:
        u = rng.random()
        if u < 0.15:
            r = Fraction(0)
        elif u < 0.25:
            r = Fraction(1)
        else:
            r = Fraction(int(rng.integers(0, 2**10 + 1)), 2**10)
    voters = []
    for _ in range(setting.n):
        rest = simplex_point(p - 1, rng)
        row = [(1 - r) * v for v in rest]
        row.insert(t, r)
        c = _complete({x: np.array(row, dtype=object)}, m, p, rng)
        voters.append(setting.scale * c)
    return Profile(np.array(voters, dtype=object), setting), x, t, setting.scale * r


def _unit(c, s):
    return c / s if s != 0 else c


def independence_partner(profile: Profile, rng, max_attempts: int = MAX_COMPLETION_ATTEMPTS):
    """A second profile agreeing with ``profile`` on one object and differing elsewhere.

    Returns ``(partner, j)``.  Other rows are re-drawn per voter around a
    random mix of row shuffles of that voter's own free rows, which keeps
    every column sum feasible.
    """
    s = profile.setting
    m, p, scale = s.m, s.p, s.scale
    for _ in range(max_attempts):
        j = int(rng.integers(m))
        free = [r for r in range(m) if r != j]
        voters = []
        for i in range(s.n):
            ci = _unit(profile.degrees[i], scale)
            own = ci[free]
            a, b = simplex_point(2, rng)
            base = a * own[rng.permutation(len(free))] + b * own[rng.permutation(len(free))]
            if scale != 0:
                new = _complete({j: ci[j]}, m, p, rng, base=base) * scale
            else:
                new = ci.copy()
                new[free] = base
            voters.append(new)
        partner = Profile(np.array(voters, dtype=object), s)
        if _differs(partner.degrees, profile.degrees):
            return partner, j
    raise PairGenerationFailed(f"no distinct completion found in {max_attempts} attempts")


def twin_profile(profile: Profile, rng) -> tuple[Profile, int, int]:
    """Replace rows ``a`` and ``b`` of every voter by their average.

    Averaging two rows keeps every row and column sum, so the result is
    valid and objects ``a`` and ``b`` are classified identically by everyone.
    """
    a, b = (int(v) for v in rng.choice(profile.setting.m, size=2, replace=False))
    deg = profile.degrees.copy()
    avg = (deg[:, a, :] + deg[:, b, :]) / 2
    deg[:, a, :] = avg
    deg[:, b, :] = avg
    return Profile(deg, profile.setting), min(a, b), max(a, b)


def _require(agg: Aggregator, profile: Profile):
    if profile.setting != agg.setting:
        raise WrongSetting(f"profile setting {profile.setting} differs from aggregator's {agg.setting}")


def _explicit(source) -> list[Profile] | None:
    if isinstance(source, Sampled):
        return None
    return list(source)


def _report(axiom, agg, trials, seed, witness=None, notes=()):
    return AxiomReport(axiom, VIOLATED if witness else SATISFIED, trials, seed,
                       agg.descriptor, witness, notes=tuple(notes), setting=agg.setting)


# ---------------------------------------------------------------------------
# per-profile violation searches (shared by checkers and replay)


def _validity_violation(agg, c: Profile) -> Witness | None:
    out = agg(c)
    v = validate_classification(out, agg.setting, _tol_for(out))
    if v is None:
        return None
    return Witness((c,), objects=(v.index,) if v.kind == "row" else (),
                   category=v.index if v.kind == "column" else None,
                   values=(v.actual, v.bound), note=f"{v.kind} {v.index} = {v.actual}, required {v.bound}")


def _unanimous_entries(c: Profile, zero_only: bool = False):
    deg = c.degrees
    for x in range(c.setting.m):
        for t in range(c.setting.p):
            col = deg[:, x, t]
            r = col[0]
            if all(v == r for v in col) and (not zero_only or r == 0):
                yield x, t, r


def _unanimity_violation(agg, c: Profile, zero_only: bool) -> Witness | None:
    out = None
    for x, t, r in _unanimous_entries(c, zero_only):
        if out is None:
            out = agg(c)
        if _differs([out[x, t]], [r]):
            return Witness((c,), objects=(x,), category=t, values=(r, out[x, t]),
                           note=f"all voters give object {x} degree {r} in category {t}, output {out[x, t]}")
    return None


def _consensus_violation(agg, c: Profile) -> Witness | None:
    out = agg(c)
    tol = _tol_for(out)
    deg = c.degrees
    for x in range(c.setting.m):
        for t in range(c.setting.p):
            lo, hi = min(deg[:, x, t]), max(deg[:, x, t])
            v = out[x, t]
            if lo - v > tol or v - hi > tol:
                return Witness((c,), objects=(x,), category=t, values=(lo, hi, v),
                               note=f"output {v} outside [{lo}, {hi}] at object {x}, category {t}")
    return None


def _pair_violation(agg, c: Profile, c2: Profile, j: int) -> Witness | None:
    a, b = agg(c)[j], agg(c2)[j]
    if _differs(a, b):
        return Witness((c, c2), objects=(j,), values=(tuple(a), tuple(b)),
                       note=f"profiles agree on object {j} but outputs differ there")
    return None


def _twin_violation(agg, c: Profile, a: int, b: int) -> Witness | None:
    out = agg(c)
    if _differs(out[a], out[b]):
        return Witness((c,), objects=(a, b), values=(tuple(out[a]), tuple(out[b])),
                       note=f"objects {a} and {b} are classified alike by all voters but not by the rule")
    return None


def _anonymity_violation(agg, c: Profile, sigma) -> Witness | None:
    a, b = agg(c), agg(permute_voters(c, sigma))
    if _differs(a, b):
        return Witness((c,), permutation=tuple(sigma), values=(a.tolist(), b.tolist()),
                       note=f"permuting voters by {tuple(sigma)} changes the output")
    return None


def _allocation_violation(agg, c: Profile) -> Witness | None:
    out = agg(c)
    s = agg.setting.scale
    cols = out.sum(axis=0)
    if _differs(cols, [s] * agg.setting.p):
        return Witness((c,), values=(tuple(cols),), note=f"column sums {tuple(cols)} differ from {s}")
    return None


def _dictator_refutation(agg, c: Profile, i: int, out=None) -> Witness | None:
    out = agg(c) if out is None else out
    if _differs(out, c.degrees[i]):
        return Witness((c,), voter=i, note=f"output differs from voter {i}'s classification")
    return None


_REPLAY = {
    OUTPUT_VALIDITY: lambda agg, w: _validity_violation(agg, w.profiles[0]) is not None,
    INDEPENDENCE: lambda agg, w: _pair_violation(agg, *w.profiles, w.objects[0]) is not None,
    SYMMETRY: lambda agg, w: _twin_violation(agg, w.profiles[0], *w.objects) is not None,
    UNANIMITY: lambda agg, w: _differs([agg(w.profiles[0])[w.objects[0], w.category]], [w.values[0]]),
    ZERO_UNANIMITY: lambda agg, w: _differs([agg(w.profiles[0])[w.objects[0], w.category]], [0]),
    FUZZY_CONSENSUS: lambda agg, w: _consensus_violation(agg, w.profiles[0]) is not None,
    ANONYMITY: lambda agg, w: _anonymity_violation(agg, w.profiles[0], w.permutation) is not None,
    K_ALLOCATION: lambda agg, w: _allocation_violation(agg, w.profiles[0]) is not None,
    NON_DICTATORSHIP: lambda agg, w: _dictator_refutation(agg, w.profiles[0], w.voter) is not None,
}


# ---------------------------------------------------------------------------
# checkers


def _single_profile_check(axiom, agg, source, finder, streams):
    """Shared loop for axioms that look at one profile at a time."""
    explicit = _explicit(source)
    if explicit is not None:
        for c in explicit:
            _require(agg, c)
            w = finder(c)
            if w is not None:
                return _report(axiom, agg, len(explicit), None, w)
        return _report(axiom, agg, len(explicit), None)
    for k in range(source.count):
        for make in streams:
            c = make(k)
            w = finder(c)
            if w is not None:
                return _report(axiom, agg, k + 1, source.seed, w)
    return _report(axiom, agg, source.count, source.seed)


def _plain(agg, source):
    return lambda k: plain_profile(agg.setting, source.seed, k, source.strategy)


def _planted(agg, source, zero):
    return lambda k: planted_profile(agg.setting, source.seed, k, zero)[0]


def check_output_validity(agg: Aggregator, source=Sampled()) -> AxiomReport:
    """Every output must itself be a valid classification for the aggregator's setting."""
    streams = [_plain(agg, source)] if isinstance(source, Sampled) else []
    return _single_profile_check(OUTPUT_VALIDITY, agg, source,
                                 lambda c: _validity_violation(agg, c), streams)


def check_unanimity(agg: Aggregator, source=Sampled()) -> AxiomReport:
    streams = []
    if isinstance(source, Sampled):
        streams = [_planted(agg, source, False), _planted(agg, source, True)]
    return _single_profile_check(UNANIMITY, agg, source,
                                 lambda c: _unanimity_violation(agg, c, False), streams)


def check_zero_unanimity(agg: Aggregator, source=Sampled()) -> AxiomReport:
    streams = [_planted(agg, source, True)] if isinstance(source, Sampled) else []
    return _single_profile_check(ZERO_UNANIMITY, agg, source,
                                 lambda c: _unanimity_violation(agg, c, True), streams)


def check_fuzzy_consensus(agg: Aggregator, source=Sampled()) -> AxiomReport:
    """Output degrees must stay within the voters' min-max range, entry by entry.

    Sampled trials examine the plain, planted and zero-planted profiles of
    each trial index.
    """
    streams = []
    if isinstance(source, Sampled):
        streams = [_plain(agg, source), _planted(agg, source, False), _planted(agg, source, True)]
    return _single_profile_check(FUZZY_CONSENSUS, agg, source,
                                 lambda c: _consensus_violation(agg, c), streams)


def check_k_allocation(agg: Aggregator, source=Sampled(), k: int | None = None) -> AxiomReport:
    """Column sums of the output must all equal the scale ``s`` (square settings, k = m)."""
    s = agg.setting
    if not s.square:
        raise WrongSetting("k-allocation is checked on square settings only")
    if k is not None and k != s.m:
        raise WrongSetting(f"k must equal m = {s.m}, got {k}")
    streams = [_plain(agg, source)] if isinstance(source, Sampled) else []
    return _single_profile_check(K_ALLOCATION, agg, source,
                                 lambda c: _allocation_violation(agg, c), streams)


def check_independence(agg: Aggregator, source=Sampled(),
                       max_attempts: int = MAX_COMPLETION_ATTEMPTS) -> AxiomReport:
    """Outputs at object ``j`` must match across profiles that agree on ``j``.

    With m = p = 2 the column constraints pin the second object once the
    first is fixed, so the axiom holds vacuously and the report says so.
    """
    s = agg.setting
    explicit = _explicit(source)
    if explicit is not None:
        for c in explicit:
            _require(agg, c)
        trials = 0
        for c, c2 in itertools.combinations(explicit, 2):
            for j in range(s.m):
                if not _differs(c.degrees[:, j], c2.degrees[:, j]):
                    trials += 1
                    w = _pair_violation(agg, c, c2, j)
                    if w is not None:
                        return _report(INDEPENDENCE, agg, trials, None, w)
        return _report(INDEPENDENCE, agg, trials, None)
    if s.m == 2 and s.p == 2:
        return _report(INDEPENDENCE, agg, 0, source.seed,
                       notes=["vacuous: with m = p = 2 fixing one object determines the other"])
    for k in range(source.count):
        c = plain_profile(s, source.seed, k, source.strategy)
        c2, j = independence_partner(c, _trial_rng(source.seed, _PAIR, k), max_attempts)
        w = _pair_violation(agg, c, c2, j)
        if w is not None:
            return _report(INDEPENDENCE, agg, k + 1, source.seed, w)
    return _report(INDEPENDENCE, agg, source.count, source.seed)


def check_symmetry(agg: Aggregator, source=Sampled()) -> AxiomReport:
    """Objects classified identically by every voter must get identical outputs."""
    s = agg.setting
    explicit = _explicit(source)
    if explicit is not None:
        trials = 0
        for c in explicit:
            _require(agg, c)
            for a, b in itertools.combinations(range(s.m), 2):
                if not _differs(c.degrees[:, a], c.degrees[:, b]):
                    trials += 1
                    w = _twin_violation(agg, c, a, b)
                    if w is not None:
                        return _report(SYMMETRY, agg, trials, None, w)
        return _report(SYMMETRY, agg, trials, None)
    for k in range(source.count):
        base = plain_profile(s, source.seed, k, source.strategy)
        c, a, b = twin_profile(base, _trial_rng(source.seed, _TWIN, k))
        w = _twin_violation(agg, c, a, b)
        if w is not None:
            return _report(SYMMETRY, agg, k + 1, source.seed, w)
    return _report(SYMMETRY, agg, source.count, source.seed)


def _transposition(n, rng):
    i, j = rng.choice(n, size=2, replace=False)
    sigma = list(range(n))
    sigma[i], sigma[j] = sigma[j], sigma[i]
    return tuple(sigma)


def check_anonymity(agg: Aggregator, source=Sampled()) -> AxiomReport:
    """Permuting voters must not change the output.

    Each trial tries one random transposition and one full random permutation.
    """
    n = agg.setting.n
    explicit = _explicit(source)
    seed = source.seed if explicit is None else 0
    if n == 1:
        count = len(explicit) if explicit is not None else source.count
        return _report(ANONYMITY, agg, count, seed, notes=["vacuous: a single voter"])
    profiles = explicit if explicit is not None else (
        plain_profile(agg.setting, source.seed, k, source.strategy) for k in range(source.count))
    trials = 0
    for k, c in enumerate(profiles):
        _require(agg, c)
        trials += 1
        rng = _trial_rng(seed, _PERM, k)
        for sigma in (_transposition(n, rng), tuple(int(v) for v in rng.permutation(n))):
            w = _anonymity_violation(agg, c, sigma)
            if w is not None:
                return _report(ANONYMITY, agg, trials, seed, w)
    return _report(ANONYMITY, agg, trials, seed)


def check_non_dictatorship(agg: Aggregator, source=Sampled()) -> AxiomReport:
    """Try to refute every voter as a dictator.

    ``satisfied`` once each voter has a profile where the output differs
    from that voter's classification.  Voters never refuted are listed in
    ``candidates`` and make the verdict ``inconclusive``: dictatorship is
    universally quantified, so it can be suspected but not confirmed here.
    """
    n = agg.setting.n
    explicit = _explicit(source)
    profiles = explicit if explicit is not None else (
        plain_profile(agg.setting, source.seed, k, source.strategy) for k in range(source.count))
    open_voters = set(range(n))
    refuted: dict[int, Witness] = {}
    trials = 0
    for c in profiles:
        _require(agg, c)
        trials += 1
        out = agg(c)
        for i in sorted(open_voters):
            w = _dictator_refutation(agg, c, i, out)
            if w is not None:
                refuted[i] = w
                open_voters.discard(i)
        if not open_voters:
            break
    seed = None if explicit is not None else source.seed
    report = AxiomReport(NON_DICTATORSHIP, SATISFIED if not open_voters else INCONCLUSIVE,
                         trials, seed, agg.descriptor, refuted=dict(sorted(refuted.items())),
                         candidates=tuple(sorted(open_voters)), setting=agg.setting)
    return report


CHECKERS = {
    OUTPUT_VALIDITY: check_output_validity,
    INDEPENDENCE: check_independence,
    SYMMETRY: check_symmetry,
    UNANIMITY: check_unanimity,
    ZERO_UNANIMITY: check_zero_unanimity,
    FUZZY_CONSENSUS: check_fuzzy_consensus,
    NON_DICTATORSHIP: check_non_dictatorship,
    ANONYMITY: check_anonymity,
    K_ALLOCATION: check_k_allocation,
}


def run_suite(agg: Aggregator, axioms: Iterable[str] | None = None,
              source=Sampled()) -> list[AxiomReport]:
    """Run several checkers in a fixed order.  k-allocation is skipped on non-square settings."""
    names = list(CHECKERS) if axioms is None else list(axioms)
    reports = []
    for name in names:
        if name not in CHECKERS:
            raise ValueError(f"unknown axiom {name!r}; choose from {sorted(CHECKERS)}")
        if name == K_ALLOCATION and not agg.setting.square:
            continue
        reports.append(CHECKERS[name](agg, source))
    return reports
