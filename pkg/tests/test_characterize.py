from fractions import Fraction as F

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from fcaf import Setting, Weights
from fcaf.aggregate import Aggregator, mean, odd_h, wam
from fcaf.axioms import Sampled
from fcaf.characterize import (
    Unequal,
    WeightMatrix,
    check_weight_equality,
    fit_wam,
    probe_profile,
    probe_system,
    probe_system_forces_equal_weights,
    recover_weight_matrix,
    shift,
)
from fcaf.errors import NonAdditive, PreconditionFailed
from fcaf.fixtures import additive_noise, cross_object, default_per_category_weights, dictator, per_category_wam

H = F(1, 2)


def _wm(cols):
    return WeightMatrix(np.array(cols, dtype=object).T)


class TestProbeProfile:
    def test_classic_pair(self):
        c = probe_profile(2, 3, [(0, 1, 2), (1, 2, 0)])
        assert c.degrees[:, 0].tolist() == [[1, 0, 0], [0, 1, 0]]
        assert c.degrees[1].tolist() == [[0, 1, 0], [0, 0, 1], [1, 0, 0]]

    def test_unanimous(self):
        c = probe_profile(3, 3, [(0, 1, 2)] * 3)
        assert all(np.array_equal(v, np.eye(3, dtype=int)) for v in c.degrees)

    def test_single_voter(self):
        c = probe_profile(1, 3, [(2, 0, 1)])
        assert c.degrees[0].tolist() == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]

    def test_rectangular_filler(self):
        c = probe_profile(2, 4, [(0, 1, 2), (1, 2, 0)], p=3)
        assert c.degrees[0, 3].tolist() == [F(1, 3)] * 3

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            probe_profile(2, 3, [(0, 0, 1), (0, 1, 2)])

    def test_shift(self):
        assert shift(1, 3) == (1, 2, 0) and shift(0, 2) == (0, 1)


class TestRecover:
    def test_known_wam(self):
        wm = recover_weight_matrix(wam([H, 0, H], Setting(3, 3, 3)))
        assert all(wm.column(t) == (H, 0, H) for t in range(3))

    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_mean_uniform(self, n, m):
        wm = recover_weight_matrix(mean(Setting(n, m, m)))
        assert set(wm.w.flat) == {F(1, n)}

    def test_dictator(self):
        wm = recover_weight_matrix(dictator(0, Setting(3, 3, 3)))
        assert all(wm.column(t) == (1, 0, 0) for t in range(3))

    def test_rectangular(self):
        wm = recover_weight_matrix(wam([F(1, 5), F(4, 5)], Setting(2, 5, 3)))
        assert check_weight_equality(wm) == Weights([F(1, 5), F(4, 5)])

    def test_per_category_needs_validity_off(self):
        s = Setting(2, 3, 3)
        agg = per_category_wam(default_per_category_weights(s), s)
        with pytest.raises(PreconditionFailed) as err:
            recover_weight_matrix(agg)
        assert err.value.report.axiom == "output-validity"
        wm = recover_weight_matrix(agg, check_validity=False)
        assert wm.column(0) == (H, H) and wm.column(1) == (1, 0)
        verdict = check_weight_equality(wm)
        assert isinstance(verdict, Unequal) and verdict.categories == (0, 1) and verdict.voter == 0

    def test_zero_unanimity_precondition(self):
        with pytest.raises(PreconditionFailed) as err:
            recover_weight_matrix(additive_noise(Setting(2, 3, 3)))
        assert err.value.report.axiom in {"zero-unanimity", "output-validity"}

    def test_inconsistent_readings(self):
        # voter 0 counts double when it is alone on the diagonal: linear readings disagree
        s = Setting(2, 3, 3)

        def fn(c):
            base = mean(s)(c)
            if np.array_equal(c.degrees[0], np.eye(3, dtype=int)):
                return c.degrees[0].copy()
            return base

        with pytest.raises(NonAdditive):
            recover_weight_matrix(Aggregator(s, fn, "switching"))

    @given(st.lists(st.integers(0, 30), min_size=3, max_size=3))
    @settings(max_examples=40, deadline=None)
    def test_round_trip(self, ks):
        if sum(ks) == 0:
            ks = [1, 1, 1]
        w = Weights([F(k, sum(ks)) for k in ks])
        assert check_weight_equality(recover_weight_matrix(wam(w, Setting(3, 4, 4)))) == w


class TestEquality:
    def test_uniform(self):
        third = [F(1, 3)] * 3
        assert check_weight_equality(_wm([third] * 3)) == Weights.uniform(3)

    def test_unequal(self):
        verdict = check_weight_equality(_wm([[H, H], [F(1, 4), F(3, 4)]]))
        assert verdict == Unequal((0, 1), 0, (H, F(1, 4)))

    def test_float_tolerance(self):
        verdict = check_weight_equality(_wm([[0.25, 0.75], [0.25 + 1e-12, 0.75 - 1e-12]]))
        assert verdict == Weights([F(1, 4), F(3, 4)])

    def test_proof_system_forces_equal_weights(self):
        assert probe_system_forces_equal_weights([(0, 1, 2), (1, 2, 0)], 3)

    def test_proof_system_by_hand(self):
        eqs, w = probe_system([(0, 1, 2), (1, 2, 0)], 3)
        assert len(eqs) == 6
        # per-category sums and the three row sums, as in the 2-voter derivation
        (sol,) = sympy.linsolve(eqs, [v for row in w for v in row])
        values = dict(zip([v for row in w for v in row], sol))
        assert sympy.simplify(values[w[1][0]] - values[w[1][1]]) == 0
        assert sympy.simplify(values[w[1][1]] - values[w[1][2]]) == 0

    def test_unanimous_probe_leaves_weights_free(self):
        assert not probe_system_forces_equal_weights([(0, 1, 2), (0, 1, 2)], 3)


class TestFit:
    def test_float_weights(self):
        w = Weights.from_floats([0.2, 0.3, 0.5])
        report = fit_wam(wam(w, Setting(3, 3, 3)))
        assert report.is_wam and report.max_residual == 0
        assert [float(x) for x in report.weights] == pytest.approx([0.2, 0.3, 0.5], abs=1e-9)

    def test_odd_cube_rule_is_not_wam(self):
        report = fit_wam(odd_h(3, Setting(2, 2, 2)))
        assert not report.is_wam and report.max_residual > 1e-3
        assert not report.in_linear_regime and report.witness is not None

    def test_dictator_flagged(self):
        report = fit_wam(dictator(1, Setting(3, 3, 3)))
        assert report.is_wam and report.degenerate
        assert any("degenerate" in note for note in report.notes)

    def test_fallback_to_least_squares(self):
        report = fit_wam(cross_object(Setting(2, 3, 3)), Sampled(count=30))
        assert report.method == "least-squares" and not report.is_wam

    def test_negative_weight_fit_surfaced(self):
        s = Setting(2, 3, 3)
        agg = Aggregator(s, lambda c: 2 * c.degrees[0] - c.degrees[1], "extrapolating")
        report = fit_wam(agg, Sampled(count=30))
        assert not report.is_wam
        assert report.unconstrained_weights == pytest.approx((2.0, -1.0), abs=1e-6)
