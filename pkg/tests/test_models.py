import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levyfluct import CompoundPoissonExp, LevyModel, brownian

CATALOG = [
    brownian(0.0, 1.0),
    brownian(1.0, 1.0),
    brownian(-1.0, 0.7),
    LevyModel(1.0, 1.0, CompoundPoissonExp(1.0, 1.0)),
    LevyModel(1.0, 1.0, CompoundPoissonExp(1.0, 2.0)),
    LevyModel(-0.5, 1.3, CompoundPoissonExp(2.5, 0.8)),
]


def models(draw_jumps=True):
    drift = st.floats(-3.0, 3.0)
    sigma = st.floats(0.2, 3.0)
    if not draw_jumps:
        return st.builds(LevyModel, drift, sigma, st.none())
    jumps = st.one_of(
        st.none(),
        st.builds(CompoundPoissonExp, st.floats(0.0, 4.0), st.floats(0.2, 5.0)))
    return st.builds(LevyModel, drift, sigma, jumps)


class TestConstruction:
    def test_sigma_must_be_positive(self):
        with pytest.raises(ValueError):
            LevyModel(0.0, 0.0)
        with pytest.raises(ValueError):
            LevyModel(0.0, -1.0)

    def test_jump_invariants(self):
        with pytest.raises(ValueError):
            CompoundPoissonExp(-1.0, 1.0)
        with pytest.raises(ValueError):
            CompoundPoissonExp(1.0, 0.0)

    def test_json_round_trip(self):
        for m in CATALOG:
            assert LevyModel.from_json(m.to_json()) == m

    def test_json_schema(self):
        m = LevyModel(1.0, 2.0, CompoundPoissonExp(0.5, 3.0))
        data = json.loads(m.to_json())
        assert data == {"drift": 1.0, "sigma": 2.0,
                        "jumps": {"type": "cp_exp", "rate": 0.5, "eta": 3.0}}
        assert json.loads(brownian().to_json())["jumps"] == {"type": "none"}


class TestPsi:
    def test_bm_quadratic(self):
        assert brownian(0.0, 1.0).psi(2.0) == pytest.approx(2.0, abs=1e-15)

    def test_zero_at_zero(self):
        for m in CATALOG:
            assert m.psi(0.0) == 0.0

    def test_cp_exp_by_substitution(self):
        # 1 + 0.5 + (1/2 - 1), with the jump exponent rate*(eta/(eta+lam) - 1)
        m = LevyModel(1.0, 1.0, CompoundPoissonExp(1.0, 1.0))
        assert m.psi(1.0) == pytest.approx(1.0, abs=1e-15)

    def test_negative_argument_rejected(self):
        with pytest.raises(ValueError):
            brownian().psi(-0.1)

    @settings(max_examples=100, deadline=None)
    @given(models(), st.floats(0.0, 8.0), st.floats(0.0, 8.0),
           st.floats(0.01, 0.99))
    def test_convexity(self, m, l1, l2, t):
        mid = m.psi(t * l1 + (1 - t) * l2)
        assert mid <= t * m.psi(l1) + (1 - t) * m.psi(l2) + 1e-9 * (1 + abs(mid))


class TestPsiPrime:
    def test_bm_derivative(self):
        assert brownian(0.0, 1.0).psi_prime(2.0) == pytest.approx(2.0)
        assert brownian(1.0, 1.0).psi_prime(0.0) == pytest.approx(1.0)

    def test_cp_exp_closed_form(self):
        m = LevyModel(1.0, 1.0, CompoundPoissonExp(1.0, 1.0))
        assert m.psi_prime(1.0) == pytest.approx(1.75, abs=1e-12)

    @pytest.mark.parametrize("m", CATALOG)
    def test_finite_difference_oracle(self, m):
        h = 1e-6
        for lam in (0.5, 1.0, 2.5):
            fd = (m.psi(lam + h) - m.psi(lam - h)) / (2 * h)
            assert m.psi_prime(lam) == pytest.approx(fd, rel=1e-7)


class TestPhi:
    def test_bm_known_roots(self):
        assert brownian(0.0, 1.0).phi(2.0) == pytest.approx(2.0, rel=1e-12)
        assert brownian(1.0, 1.0).phi(0.0) == 0.0
        # largest root of -lam + lam^2/2 = 0
        assert brownian(-1.0, 1.0).phi(0.0) == pytest.approx(2.0, rel=1e-10)

    def test_bisection_oracle(self):
        m = brownian(-1.0, 1.0)
        lo, hi = 1.0, 10.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if m.psi(mid) < 0.7:
                lo = mid
            else:
                hi = mid
        assert m.phi(0.7) == pytest.approx(hi, rel=1e-10)

    @pytest.mark.parametrize("m", CATALOG)
    def test_inverse_identity_log_grid(self, m):
        for gamma in np.logspace(-3, 3, 25):
            lam = m.phi(gamma)
            assert lam >= 0.0
            assert m.psi(lam) == pytest.approx(gamma, rel=1e-10)

    @pytest.mark.parametrize("m", CATALOG)
    def test_nondecreasing_in_gamma(self, m):
        phis = [m.phi(g) for g in np.linspace(0.0, 50.0, 40)]
        assert all(b >= a - 1e-12 for a, b in zip(phis, phis[1:]))

    def test_largest_root_selected(self):
        # drift < 0 gives psi two nonnegative roots at gamma = 0
        m = brownian(-2.0, 1.0)
        assert m.phi(0.0) == pytest.approx(4.0, rel=1e-10)


class TestEsscherTilt:
    def test_bm_tilt_closed_form(self):
        # phi(0.5) = 1 for standard BM: tilt adds sigma^2 * phi to the drift
        tilted = brownian(0.0, 1.0).esscher_tilt(0.5)
        assert tilted.drift == pytest.approx(1.0, rel=1e-12)
        assert tilted.sigma == 1.0
        assert tilted.jumps is None

    @pytest.mark.parametrize("m", CATALOG)
    @pytest.mark.parametrize("gamma", [0.25, 1.0])
    def test_exponent_identity_on_grid(self, m, gamma):
        tilted = m.esscher_tilt(gamma)
        c = m.phi(gamma)
        for lam in np.linspace(0.0, 5.0, 21):
            want = m.psi(lam + c) - gamma
            got = tilted.psi(lam)
            assert abs(got - want) <= 1e-10 * (1.0 + abs(want))

    def test_tilted_exponent_vanishes_at_zero(self):
        for m in CATALOG:
            assert abs(m.esscher_tilt(1.0).psi(0.0)) == 0.0

    def test_requires_positive_gamma(self):
        with pytest.raises(ValueError):
            brownian().esscher_tilt(0.0)

    def test_tilted_jumps_stay_in_catalog(self):
        m = LevyModel(1.0, 1.0, CompoundPoissonExp(1.0, 2.0))
        tilted = m.esscher_tilt(1.0)
        c = m.phi(1.0)
        assert tilted.jumps.eta == pytest.approx(2.0 + c, rel=1e-12)
        assert tilted.jumps.rate == pytest.approx(2.0 / (2.0 + c), rel=1e-12)
