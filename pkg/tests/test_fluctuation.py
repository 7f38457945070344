import math

import numpy as np
import pytest

from levyfluct import (CompoundPoissonExp, LevyModel, Window, brownian,
                       build_evaluator, exit_down_lt, exit_up_lt,
                       exit_up_lt_from_min, joint_sup_inf_cdf,
                       killed_before_down, killed_before_exit,
                       killed_before_up, killed_in_window,
                       max_loss_post_sup_cdf, one_sided_down_lt,
                       post_inf_sup_cdf)

# frozen references for standard BM at gamma = 0.5 (W = 2 sinh, Z = cosh),
# evaluated by partial fractions at 30 digits
EXIT_UP_1_2 = 0.3240271368319427
EXIT_DOWN_1_2 = 0.3240271368319427
ONE_SIDED_1 = 0.36787944117144233
JOINT_M1_1 = 0.3519457263361146
POST_INF_SUP_1 = 0.46211715726000976
MAXLOSS_05 = 0.32158684581336856
MAXLOSS_10 = 0.6067761335170363
MAXLOSS_15 = 0.8339729860324430


@pytest.fixture(scope="module")
def cp_evaluator():
    model = LevyModel(1.0, 1.0, CompoundPoissonExp(1.0, 2.0))
    return build_evaluator(model, gamma=0.5, x_max=8.0)


class TestWindow:
    def test_invariant(self):
        Window(-1.0, 1.0)
        with pytest.raises(ValueError):
            Window(1.0, 2.0)
        with pytest.raises(ValueError):
            Window(-1.0, -0.5)
        with pytest.raises(ValueError):
            Window(0.0, 1.0)


class TestExitTransforms:
    def test_boundaries(self, bm_evaluator):
        assert exit_up_lt(bm_evaluator, 2.0, 2.0) == 1.0
        assert exit_up_lt(bm_evaluator, 0.0, 2.0) == 0.0
        assert exit_down_lt(bm_evaluator, 0.0, 2.0) == 1.0
        assert exit_down_lt(bm_evaluator, 2.0, 2.0) == 0.0

    def test_bm_values(self, bm_evaluator):
        assert exit_up_lt(bm_evaluator, 1.0, 2.0) == pytest.approx(EXIT_UP_1_2, rel=1e-12)
        assert exit_down_lt(bm_evaluator, 1.0, 2.0) == pytest.approx(EXIT_DOWN_1_2, rel=1e-12)

    def test_domain_errors(self, bm_evaluator):
        with pytest.raises(ValueError):
            exit_up_lt(bm_evaluator, -0.1, 1.0)
        with pytest.raises(ValueError):
            exit_up_lt(bm_evaluator, 2.0, 1.0)
        with pytest.raises(ValueError):
            exit_up_lt(bm_evaluator, 0.5, -1.0)
        with pytest.raises(ValueError):
            exit_down_lt(bm_evaluator, 3.0, 2.0)

    def test_one_sided(self, bm_evaluator):
        assert one_sided_down_lt(bm_evaluator, 0.0) == 1.0
        assert one_sided_down_lt(bm_evaluator, 1.0) == pytest.approx(ONE_SIDED_1, rel=1e-12)

    def test_one_sided_decays_to_zero(self, bm_evaluator):
        xs = np.linspace(0.0, bm_evaluator.x_max, 30)
        vals = [one_sided_down_lt(bm_evaluator, x) for x in xs]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-3

    def test_decomposition_identity(self, bm_evaluator, cp_evaluator):
        # up + down + killed-in-window account for every outcome
        for ev in (bm_evaluator, cp_evaluator):
            for x, b in [(0.3, 1.0), (1.0, 2.0), (2.5, 3.0)]:
                total = (exit_up_lt(ev, x, b) + exit_down_lt(ev, x, b)
                         + killed_in_window(ev, x, b))
                assert total == pytest.approx(1.0, abs=1e-9)
                assert exit_up_lt(ev, x, b) + exit_down_lt(ev, x, b) <= 1.0 + 1e-12


class TestSurvivalFunctions:
    def test_killed_before_down_complements(self, bm_evaluator, cp_evaluator):
        for ev in (bm_evaluator, cp_evaluator):
            for x in (0.0, 0.5, 1.7, 4.0):
                assert killed_before_down(ev, x) == 1.0 - one_sided_down_lt(ev, x)

    def test_bm_closed_form(self, bm_evaluator):
        # standard BM: 1 - exp(-x sqrt(2 gamma))
        for x in (0.1, 0.5, 1.0, 3.0):
            want = 1.0 - math.exp(-x * math.sqrt(2 * bm_evaluator.gamma))
            assert killed_before_down(bm_evaluator, x) == pytest.approx(want, rel=1e-10)

    def test_killed_before_down_tail(self, bm_evaluator):
        assert killed_before_down(bm_evaluator, 0.0) == 0.0
        assert killed_before_down(bm_evaluator, bm_evaluator.x_max) > 0.999

    def test_killed_before_up(self, bm_evaluator):
        assert killed_before_up(bm_evaluator, 0.0) == 0.0
        assert killed_before_up(bm_evaluator, 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-12)
        assert killed_before_up(bm_evaluator, 200.0) == pytest.approx(1.0, abs=1e-15)

    def test_killed_before_exit_ends(self, bm_evaluator):
        assert killed_before_exit(bm_evaluator, 0.0, -1.0, 1.0) == 0.0
        assert killed_before_exit(bm_evaluator, 2.0, -1.0, 1.0) == 0.0

    def test_killed_before_exit_value(self, bm_evaluator):
        got = killed_before_exit(bm_evaluator, 1.0, -1.0, 1.0)
        assert got == pytest.approx(JOINT_M1_1, rel=1e-12)


class TestJointLaw:
    def test_value(self, bm_evaluator):
        got = joint_sup_inf_cdf(bm_evaluator, Window(-1.0, 1.0))
        assert got == pytest.approx(JOINT_M1_1, rel=1e-12)

    def test_tuple_accepted(self, bm_evaluator):
        assert joint_sup_inf_cdf(bm_evaluator, (-1.0, 1.0)) == \
            joint_sup_inf_cdf(bm_evaluator, Window(-1.0, 1.0))

    def test_degenerate_window_vanishes(self, bm_evaluator):
        assert joint_sup_inf_cdf(bm_evaluator, Window(-1e-9, 1.0)) == \
            pytest.approx(0.0, abs=1e-8)

    def test_window_invariant_enforced(self, bm_evaluator):
        with pytest.raises(ValueError):
            joint_sup_inf_cdf(bm_evaluator, Window(0.5, 1.0))

    def test_marginal_limit_is_sup_law(self, bm_evaluator):
        # a -> -inf recovers P(sup < b) = 1 - exp(-phi b)
        b = 1.0
        a = -(bm_evaluator.x_max - b)
        got = joint_sup_inf_cdf(bm_evaluator, Window(a, b))
        want = killed_before_up(bm_evaluator, b)
        assert abs(got - want) < 1e-3

    def test_marginal_limit_is_inf_law(self, bm_evaluator):
        # b -> inf recovers P(inf > a) = P(clock before passage below a)
        a = -1.0
        b = bm_evaluator.x_max + a
        got = joint_sup_inf_cdf(bm_evaluator, Window(a, b))
        want = killed_before_down(bm_evaluator, -a)
        assert abs(got - want) < 1e-3

    def test_monotone_in_window(self, bm_evaluator):
        vals = [joint_sup_inf_cdf(bm_evaluator, Window(-1.0, b))
                for b in np.linspace(0.25, 3.0, 12)]
        assert all(v2 >= v1 - 1e-12 for v1, v2 in zip(vals, vals[1:]))


class TestPostInfSup:
    def test_value(self, bm_evaluator):
        assert post_inf_sup_cdf(bm_evaluator, -1.0, 0.0) == \
            pytest.approx(POST_INF_SUP_1, rel=1e-12)

    def test_depends_on_span_only(self, bm_evaluator):
        assert post_inf_sup_cdf(bm_evaluator, -1.0, 0.5) == \
            post_inf_sup_cdf(bm_evaluator, -2.5, -1.0)

    def test_small_span_limit(self, bm_evaluator):
        assert post_inf_sup_cdf(bm_evaluator, 0.0, 1e-8) == pytest.approx(0.0, abs=1e-7)

    def test_large_span_limit(self, bm_evaluator):
        assert post_inf_sup_cdf(bm_evaluator, 0.0, bm_evaluator.x_max) == \
            pytest.approx(1.0, abs=1e-3)

    def test_equal_levels_rejected(self, bm_evaluator):
        with pytest.raises(ValueError):
            post_inf_sup_cdf(bm_evaluator, 1.0, 1.0)

    def test_nondecreasing_in_b(self, bm_evaluator, cp_evaluator):
        for ev in (bm_evaluator, cp_evaluator):
            vals = [post_inf_sup_cdf(ev, -1.0, b) for b in np.linspace(-0.5, 3.0, 15)]
            assert all(v2 >= v1 - 1e-12 for v1, v2 in zip(vals, vals[1:]))


class TestMaxLossPostSup:
    def test_frozen_values(self, bm_evaluator):
        assert max_loss_post_sup_cdf(bm_evaluator, 0.5, -1.0, 1.0) == \
            pytest.approx(MAXLOSS_05, rel=1e-12)
        assert max_loss_post_sup_cdf(bm_evaluator, 1.0, -1.0, 1.0) == \
            pytest.approx(MAXLOSS_10, rel=1e-12)
        assert max_loss_post_sup_cdf(bm_evaluator, 1.5, -1.0, 1.0) == \
            pytest.approx(MAXLOSS_15, rel=1e-12)

    def test_full_span_limit(self, bm_evaluator):
        got = max_loss_post_sup_cdf(bm_evaluator, 2.0 - 1e-10, -1.0, 1.0)
        assert got == pytest.approx(1.0, abs=1e-9)

    def test_domain(self, bm_evaluator):
        with pytest.raises(ValueError):
            max_loss_post_sup_cdf(bm_evaluator, 0.0, -1.0, 1.0)
        with pytest.raises(ValueError):
            max_loss_post_sup_cdf(bm_evaluator, 2.0, -1.0, 1.0)

    def test_nondecreasing_in_d(self, bm_evaluator, cp_evaluator):
        for ev in (bm_evaluator, cp_evaluator):
            ds = np.linspace(0.05, 1.95, 25)
            vals = [max_loss_post_sup_cdf(ev, d, -1.0, 1.0) for d in ds]
            assert all(v2 >= v1 - 1e-10 for v1, v2 in zip(vals, vals[1:]))
            assert all(0.0 <= v <= 1.0 for v in vals)


class TestRebasedExit:
    def test_identity_with_exit_up(self, bm_evaluator):
        xs = [(0.5, 0.0, 2.0), (1.0, -1.0, 1.5), (-0.2, -1.0, 2.0)]
        for x, i, b in xs:
            assert exit_up_lt_from_min(bm_evaluator, x, i, b) == \
                exit_up_lt(bm_evaluator, x - i, b - i)

    def test_boundaries(self, bm_evaluator):
        assert exit_up_lt_from_min(bm_evaluator, 2.0, 0.0, 2.0) == 1.0
        assert exit_up_lt_from_min(bm_evaluator, 0.0, 0.0, 2.0) == 0.0

    def test_ordering_enforced(self, bm_evaluator):
        with pytest.raises(ValueError):
            exit_up_lt_from_min(bm_evaluator, -0.5, 0.0, 1.0)
        with pytest.raises(ValueError):
            exit_up_lt_from_min(bm_evaluator, 2.5, 0.0, 1.0)


class TestUnitRange:
    """Randomized sweep: every functional stays within [0, 1]."""

    @pytest.mark.parametrize("seed", [0, 1])
    def test_all_functionals_in_unit_interval(self, seed, bm_evaluator, cp_evaluator):
        rng = np.random.default_rng(seed)
        for ev in (bm_evaluator, cp_evaluator):
            for _ in range(300):
                b = rng.uniform(0.05, 3.0)
                x = rng.uniform(0.0, b)
                a = -rng.uniform(0.05, 3.0)
                d = rng.uniform(1e-3, b - a - 1e-3)
                vals = [
                    exit_up_lt(ev, x, b),
                    exit_down_lt(ev, x, b),
                    one_sided_down_lt(ev, x),
                    killed_before_down(ev, x),
                    killed_before_up(ev, x),
                    killed_in_window(ev, x, b),
                    joint_sup_inf_cdf(ev, Window(a, b)),
                    post_inf_sup_cdf(ev, a, b),
                    max_loss_post_sup_cdf(ev, d, a, b),
                    killed_before_exit(ev, d, a, b),
                    exit_up_lt_from_min(ev, x + a, a, b),
                ]
                for v in vals:
                    assert 0.0 <= v <= 1.0
