from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import EXAMPLE_OUTPUT, EXAMPLE_VOTERS, power_mean, wam as wam_oracle

from fcaf import (
    Profile,
    Setting,
    Weights,
    arithmetic_mean,
    h_aggregate_2x2,
    odd_power_mean,
    star_wam,
    validate_classification,
    wam_aggregate,
)
from fcaf.aggregate import (
    CustomH,
    OddPowerMean,
    WeightedSum,
    odd_h,
    parse_rule,
    per_entry_power_rule,
    wam,
)
from fcaf.axioms import Sampled, check_output_validity
from fcaf.errors import EvenExponent, InvalidH, LengthMismatch, WrongSetting
from fcaf.sample import SamplerConfig, sample_profile

H = F(1, 2)


def _profile(seed, n, m, p, strategy="birkhoff"):
    return sample_profile(SamplerConfig(Setting(n, m, p), seed=seed, strategy=strategy))


class TestWam:
    def test_worked_example(self, example_profile):
        out = wam_aggregate(Weights([H, 0, H]), example_profile)
        assert out.tolist() == EXAMPLE_OUTPUT

    def test_dictator_copies_voter(self, example_profile):
        out = wam_aggregate(Weights([0, 1, 0]), example_profile)
        assert np.array_equal(out, example_profile.degrees[1])

    def test_idempotent_on_unanimous_profile(self):
        m = [[H, H, 0], [0, H, H], [H, 0, H]]
        c = Profile.from_voters([m, m])
        assert wam_aggregate(Weights([H, H]), c).tolist() == m

    def test_length_mismatch(self, example_profile):
        with pytest.raises(LengthMismatch):
            wam_aggregate(Weights([H, H]), example_profile)

    @pytest.mark.parametrize("n,m,p", [(2, 3, 3), (3, 4, 3), (4, 5, 2), (5, 4, 4)])
    def test_convexity_closure(self, n, m, p):
        rng = np.random.default_rng(n * 100 + m * 10 + p)
        ws = [Weights.uniform(n), Weights([1] + [0] * (n - 1))]
        for k in range(1000):
            c = _profile(k, n, m, p, ("birkhoff", "dirichlet", "vertex")[k % 3])
            w = ws[k % 2] if k % 3 else Weights.from_floats(rng.dirichlet(np.ones(n)))
            out = wam_aggregate(w, c)
            assert validate_classification(out, c.setting) is None
            lo = c.degrees.min(axis=0)
            hi = c.degrees.max(axis=0)
            assert np.all(lo <= out) and np.all(out <= hi)

    @given(st.integers(0, 10_000), st.lists(st.integers(0, 20), min_size=3, max_size=3))
    @settings(max_examples=50, deadline=None)
    def test_matches_oracle(self, seed, ks):
        if sum(ks) == 0:
            ks = [1, 0, 0]
        w = [F(k, sum(ks)) for k in ks]
        c = _profile(seed, 3, 4, 3, "dirichlet")
        voters = [[list(row) for row in v] for v in c.degrees]
        assert wam_aggregate(Weights(w), c).tolist() == wam_oracle(w, voters)


class TestArithmeticMean:
    def test_single_voter(self):
        c = _profile(3, 1, 3, 3)
        assert np.array_equal(arithmetic_mean(c), c.degrees[0])

    def test_identity_and_cycle(self):
        c = Profile.from_voters([np.eye(3, dtype=int), np.roll(np.eye(3, dtype=int), 1, axis=1)])
        out = arithmetic_mean(c)
        assert out.tolist() == [[H, H, 0], [0, H, H], [H, 0, H]]

    def test_example_first_object(self, example_profile):
        third = [F(1, 3)] * 3
        expected = wam_oracle(third, EXAMPLE_VOTERS)[0]
        assert expected == [F(11, 18), F(11, 36), F(1, 12)]
        assert list(arithmetic_mean(example_profile)[0]) == expected


class TestOddPowerMean:
    def test_linear_case(self):
        assert odd_power_mean(1, [F(1, 4), F(-1, 4)]) == 0

    def test_fixed_point(self):
        assert odd_power_mean(3, [H, H]) == H

    def test_irrational_root(self):
        got = odd_power_mean(3, [H, 0])
        assert isinstance(got, float)
        assert got == pytest.approx(power_mean(3, [0.5, 0.0]), rel=1e-15)
        assert got == pytest.approx(0.39685, abs=1e-5)

    def test_exact_root_when_rational(self):
        assert odd_power_mean(3, [F(1, 2), F(-1, 2)]) == 0
        # (1/8 + 0 + 0 + 0) / 4 = 1/32 has no rational cube root, 1/64 does
        assert isinstance(odd_power_mean(3, [F(1, 2), 0, 0, 0]), float)
        got = odd_power_mean(3, [F(1, 2), 0, 0, 0, 0, 0, 0, 0])
        assert got == F(1, 4) and isinstance(got, F)

    @pytest.mark.parametrize("q", [0, 2, 4, -1])
    def test_even_or_nonpositive(self, q):
        with pytest.raises(EvenExponent):
            odd_power_mean(q, [H])

    @given(st.lists(st.fractions(-H, H, max_denominator=64), min_size=1, max_size=5),
           st.sampled_from([1, 3, 5, 7]))
    @settings(max_examples=200, deadline=None)
    def test_oddness_and_oracle(self, xs, q):
        a = odd_power_mean(q, xs)
        b = odd_power_mean(q, [-x for x in xs])
        assert float(a) == pytest.approx(-float(b), abs=1e-12)
        assert float(a) == pytest.approx(power_mean(q, xs), abs=1e-12)
        assert -H <= a <= H


def _two_by_two(cols):
    """Profile from each voter's first-object row (a, 1 - a)."""
    return Profile.from_voters([[[a, 1 - a], [1 - a, a]] for a in cols], Setting(len(cols), 2, 2))


class TestHAggregate:
    @given(st.integers(0, 10_000), st.lists(st.integers(0, 9), min_size=3, max_size=3))
    @settings(max_examples=50, deadline=None)
    def test_weighted_sum_equals_wam(self, seed, ks):
        if sum(ks) == 0:
            ks = [0, 0, 1]
        w = Weights([F(k, sum(ks)) for k in ks])
        c = _profile(seed, 3, 2, 2)
        assert np.array_equal(h_aggregate_2x2(WeightedSum(w), c), wam_aggregate(w, c))

    @pytest.mark.parametrize("h", [OddPowerMean(3), OddPowerMean(5), WeightedSum(Weights([F(1, 3), F(2, 3)]))])
    def test_crisp_unanimity_preserved(self, h):
        c = _two_by_two([1, 1])
        assert h_aggregate_2x2(h, c).tolist() == [[1, 0], [0, 1]]

    def test_cube_mean_of_opposites(self):
        out = h_aggregate_2x2(OddPowerMean(3), _two_by_two([1, 0]))
        assert out.tolist() == [[H, H], [H, H]]

    def test_wrong_setting(self, example_profile):
        with pytest.raises(WrongSetting):
            h_aggregate_2x2(OddPowerMean(3), example_profile)
        with pytest.raises(WrongSetting):
            odd_h(3, Setting(2, 3, 3))

    def test_outputs_valid(self):
        agg = odd_h(3, Setting(3, 2, 2))
        assert check_output_validity(agg, Sampled(count=300)).satisfied

    def test_custom_h_accepted(self):
        h = CustomH(lambda xs: sum(xs) / len(xs), n=2)
        assert h_aggregate_2x2(h, _two_by_two([1, 0])).tolist() == [[H, H], [H, H]]

    @pytest.mark.parametrize("fn", [
        lambda xs: abs(xs[0]),           # even
        lambda xs: xs[0] / 2,            # misses the fixed point
        lambda xs: 2 * xs[0] - xs[1],    # leaves the range
    ])
    def test_custom_h_rejected(self, fn):
        with pytest.raises(InvalidH):
            CustomH(fn, n=2)


class TestEntrywiseCubic:
    def test_row_sums_break_at_three(self):
        agg = per_entry_power_rule(3, Setting(2, 3, 3))
        third = F(1, 3)
        c = Profile.from_voters([np.eye(3, dtype=int), [[third] * 3] * 3])
        out = agg(c)
        # row 0 shifts to (1/2, -1/6), (-1/2, -1/6), (-1/2, -1/6)
        sixth = F(-1, 6)
        expected = (power_mean(3, [H, sixth]) + 2 * power_mean(3, [-H, sixth])) + 1.5
        assert float(sum(out[0])) == pytest.approx(expected, abs=1e-12)
        assert abs(float(sum(out[0])) - 1) > 1e-6


class TestStarWam:
    def test_hours(self):
        s = Setting.star(2, 2, 2, 8)
        c = Profile([[[8, 0], [0, 8]], [[0, 8], [8, 0]]], s)
        assert star_wam(Weights([F(3, 4), F(1, 4)]), c).tolist() == [[6, 2], [2, 6]]

    def test_negative_scale_dictator(self):
        s = Setting.star(2, 3, 3, -1)
        c = sample_profile(SamplerConfig(s, seed=4))
        assert np.array_equal(star_wam(Weights([0, 1]), c), c.degrees[1])

    def test_unit_scale_matches_standard(self):
        c = _profile(9, 2, 3, 3)
        star = Profile(c.degrees, Setting.star(2, 3, 3, 1))
        w = Weights([F(1, 5), F(4, 5)])
        assert np.array_equal(star_wam(w, star), wam_aggregate(w, c))

    def test_requires_star(self):
        with pytest.raises(WrongSetting):
            star_wam(Weights([H, H]), _profile(1, 2, 2, 2))

    @pytest.mark.parametrize("scale", [8, -1, F(5, 2), 0])
    def test_outputs_star_valid(self, scale):
        s = Setting.star(3, 4, 3, scale)
        agg = wam([F(1, 2), F(1, 4), F(1, 4)], s)
        assert check_output_validity(agg, Sampled(count=200)).satisfied


class TestParseRule:
    def test_forms(self):
        s = Setting(3, 3, 3)
        assert parse_rule("wam:1/2,0,1/2", s).descriptor == "wam:1/2,0,1/2"
        assert parse_rule("mean", s).descriptor == "mean"
        assert parse_rule("fixture:cross-object", s).descriptor.startswith("fixture:")
        with pytest.raises(WrongSetting):
            parse_rule("oddh:3", s)
        with pytest.raises(ValueError):
            parse_rule("median", s)
