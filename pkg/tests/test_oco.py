import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocoboost.core import InvalidInputError, ProtocolError, RngStream
from ocoboost.oco import (
    BoxDomain,
    LinearLoss,
    best_fixed_point,
    interval,
    oco_new,
    oco_next,
    oco_realized_regret,
    oco_update,
    ogd_regret_bound,
)


class TestBoxDomain:
    def test_diameter_is_l2_norm_of_side_lengths(self):
        d = BoxDomain(np.array([-1.0, 0.0]), np.array([1.0, 1.0]))
        assert d.diameter == pytest.approx(np.sqrt(4 + 1))

    def test_rejects_inverted_bounds(self):
        with pytest.raises(InvalidInputError):
            interval(1.0, -1.0)

    def test_clamp(self):
        d = interval(-1.0, 1.0)
        np.testing.assert_array_equal(d.clamp(np.array([2.0])), [1.0])
        np.testing.assert_array_equal(d.clamp(np.array([-9.0])), [-1.0])


class TestRegretBoundFormula:
    def test_frozen_values(self):
        assert ogd_regret_bound(2.0, 2.0, 100) == pytest.approx(60.0)
        assert ogd_regret_bound(4.0, 2.0, 400) == pytest.approx(240.0)


class TestStepByStep:
    def test_first_step_hits_the_corner(self):
        # one update with coeff +2 on [-1, 1], G = 2: eta_1 = 1, so the
        # iterate moves from 0 to clamp(0 - 2) = -1
        s = oco_new(interval(-1.0, 1.0), horizon=5, grad_bound=2.0, initial=[0.0])
        oco_update(s, LinearLoss([2.0]))
        np.testing.assert_array_equal(s.iterate, [-1.0])

    def test_single_loss_regret(self):
        s = oco_new(interval(-1.0, 1.0), horizon=1, grad_bound=2.0, initial=[0.0])
        losses = [LinearLoss([1.0])]
        oco_update(s, losses[0])
        assert oco_realized_regret(s, losses) == pytest.approx(1.0)

    def test_play_before_any_update_is_initial(self):
        s = oco_new(interval(0.0, 1.0), horizon=3, grad_bound=2.0, initial=[0.5])
        np.testing.assert_array_equal(oco_next(s), [0.5])

    def test_horizon_exhaustion_is_a_protocol_error(self):
        s = oco_new(interval(-1.0, 1.0), horizon=1, grad_bound=1.0, initial=[0.0])
        oco_update(s, LinearLoss([1.0]))
        with pytest.raises(ProtocolError):
            oco_next(s)
        with pytest.raises(ProtocolError):
            oco_update(s, LinearLoss([1.0]))

    def test_initial_outside_domain_rejected(self):
        with pytest.raises(InvalidInputError):
            oco_new(interval(0.0, 1.0), horizon=1, grad_bound=1.0, initial=[2.0])

    def test_dimension_mismatch_rejected(self):
        s = oco_new(interval(0.0, 1.0), horizon=2, grad_bound=1.0, initial=[0.5])
        with pytest.raises(InvalidInputError):
            oco_update(s, LinearLoss([1.0, 1.0]))

    def test_oversized_gradient_clipped_and_counted(self):
        s = oco_new(interval(-1.0, 1.0), horizon=2, grad_bound=1.0, initial=[0.0])
        oco_update(s, LinearLoss([5.0]))
        assert s.clip_count == 1
        assert s.domain.contains(s.iterate)

    def test_zero_loss_leaves_iterate_unchanged(self):
        s = oco_new(interval(-1.0, 1.0), horizon=3, grad_bound=2.0, initial=[0.25])
        oco_update(s, LinearLoss([0.0]))
        np.testing.assert_array_equal(s.iterate, [0.25])
        assert s.cumulative_loss == 0.0


class TestBestFixedPoint:
    def test_corner_selection(self):
        d = BoxDomain(np.array([-1.0, 0.0]), np.array([1.0, 1.0]))
        np.testing.assert_array_equal(best_fixed_point(d, np.array([3.0, -2.0])), [-1.0, 1.0])

    def test_zero_direction_any_corner_is_optimal(self):
        d = interval(-1.0, 1.0)
        p = best_fixed_point(d, np.array([0.0]))
        assert d.contains(p)


@given(st.integers(min_value=1, max_value=3), st.integers(min_value=1, max_value=30),
       st.integers(min_value=0, max_value=1000))
@settings(max_examples=60, deadline=None)
def test_iterate_stays_feasible_and_regret_bounded(dim, horizon, seed):
    rng = RngStream(seed, 0)
    g = 2.0
    dom = BoxDomain(-np.ones(dim), np.ones(dim))
    s = oco_new(dom, horizon, g, np.zeros(dim))
    losses = []
    for _ in range(horizon):
        c = (rng.uniforms(dim) * 2 - 1)
        n = np.linalg.norm(c)
        if n > g:
            c = c * (g / n)
        loss = LinearLoss(c)
        losses.append(loss)
        oco_update(s, loss)
        assert dom.contains(s.iterate)
    assert s.clip_count == 0
    assert oco_realized_regret(s, losses) <= ogd_regret_bound(g, dom.diameter, horizon) + 1e-9
