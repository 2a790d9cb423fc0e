import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocoboost.core import (
    ExpertPool,
    InvalidInputError,
    LabeledSequence,
    RngStream,
    best_in_hindsight,
    constant_hypothesis,
    correlation,
    threshold_stump,
    vote_expectation,
    vote_project,
)


class TestRngStream:
    def test_same_seed_and_stream_reproduce(self):
        a = RngStream(7, 3)
        b = RngStream(7, 3)
        assert [a.uniform() for _ in range(20)] == [b.uniform() for _ in range(20)]

    def test_distinct_streams_differ(self):
        a = RngStream(7, 1)
        b = RngStream(7, 2)
        assert a.uniforms(16).tolist() != b.uniforms(16).tolist()

    def test_bulk_draws_match_scalar_draws(self):
        a = RngStream(11, 5)
        b = RngStream(11, 5)
        bulk = a.uniforms(64)
        scalars = np.array([b.uniform() for _ in range(64)])
        np.testing.assert_array_equal(bulk, scalars)

    def test_draw_counter(self):
        r = RngStream(0, 0)
        r.uniform()
        r.uniforms(10)
        r.coin(0.5)
        assert r.draws == 12

    def test_weighted_index_distribution(self):
        r = RngStream(1, 0)
        w = np.array([1.0, 1.0, 2.0])
        counts = np.bincount([r.weighted_index(w) for _ in range(40000)], minlength=3)
        np.testing.assert_allclose(counts / 40000, [0.25, 0.25, 0.5], atol=0.02)

    def test_weighted_index_consumes_one_draw(self):
        r = RngStream(1, 0)
        r.weighted_index(np.array([3.0, 1.0]))
        assert r.draws == 1


class TestVoteProject:
    def test_deterministic_outside_open_interval(self):
        r = RngStream(0, 0)
        assert vote_project(1.0, r) == 1
        assert vote_project(2.5, r) == 1
        assert vote_project(-1.0, r) == -1
        assert vote_project(-3.0, r) == -1
        assert r.draws == 0, "deterministic branch must not consume randomness"

    def test_randomized_branch_consumes_one_draw(self):
        r = RngStream(0, 0)
        vote_project(0.3, r)
        assert r.draws == 1

    def test_non_finite_rejected(self):
        r = RngStream(0, 0)
        for bad in (float("nan"), float("inf"), float("-inf")):
            with pytest.raises(InvalidInputError):
                vote_project(bad, r)

    def test_mean_at_half(self):
        # frozen check: 1e5 draws at z = 0.5 land within 0.0064 of 0.5
        r = RngStream(2, 0)
        mean = np.mean([vote_project(0.5, r) for _ in range(100_000)])
        assert abs(mean - 0.5) <= 4 * np.sqrt(1 / (4 * 100_000))

    @given(st.floats(min_value=-10, max_value=10, allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_output_is_a_label(self, z):
        assert vote_project(z, RngStream(3, 0)) in (-1, 1)


class TestVoteExpectation:
    def test_clamp_values(self):
        assert vote_expectation(-2.0) == -1.0
        assert vote_expectation(0.3) == pytest.approx(0.3)
        assert vote_expectation(7.0) == 1.0

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidInputError):
            vote_expectation(float("nan"))

    @given(st.floats(min_value=-100, max_value=100, allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_equals_clip(self, z):
        assert vote_expectation(z) == float(np.clip(z, -1.0, 1.0))


class TestCorrelation:
    def test_perfect_agreement(self):
        assert correlation([1, -1, 1], [1, -1, 1]) == 1.0

    def test_perfect_disagreement(self):
        assert correlation([1, -1, 1], [-1, 1, -1]) == -1.0

    def test_hand_computed_mixture(self):
        assert correlation([1, 1, -1, 1], [1, -1, -1, 1]) == 0.5

    def test_length_mismatch_rejected(self):
        with pytest.raises(InvalidInputError):
            correlation([1, 1], [1])

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            correlation([], [])

    def test_non_sign_entries_rejected(self):
        with pytest.raises(InvalidInputError):
            correlation([1, 0], [1, 1])

    @given(st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=50),
           st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=50))
    @settings(max_examples=100, deadline=None)
    def test_bounded(self, a, b):
        n = min(len(a), len(b))
        c = correlation(a[:n], b[:n])
        assert -1.0 <= c <= 1.0


class TestThresholdStump:
    def test_sign_zero_convention(self):
        h = threshold_stump(0.5, 1)
        assert h.predict(0.5) == 1
        assert h.predict(0.49) == -1
        assert threshold_stump(0.5, -1).predict(0.5) == -1

    @given(st.floats(min_value=0, max_value=1), st.sampled_from([-1, 1]),
           st.lists(st.floats(min_value=0, max_value=1, allow_nan=False), min_size=1, max_size=20))
    @settings(max_examples=100, deadline=None)
    def test_batch_matches_scalar(self, theta, s, xs):
        h = threshold_stump(theta, s)
        np.testing.assert_array_equal(h.predict_batch(np.array(xs)),
                                      [h.predict(x) for x in xs])


class TestExpertPool:
    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            ExpertPool([])

    def test_duplicate_ids_rejected(self):
        with pytest.raises(InvalidInputError):
            ExpertPool([constant_hypothesis(1), constant_hypothesis(1)])

    def test_prediction_matrix_shape_and_values(self):
        pool = ExpertPool([constant_hypothesis(1), constant_hypothesis(-1)])
        m = pool.prediction_matrix(np.array([0.1, 0.9, 0.4]))
        np.testing.assert_array_equal(m, [[1, -1], [1, -1], [1, -1]])


class TestLabeledSequence:
    def test_validates_labels(self):
        with pytest.raises(InvalidInputError):
            LabeledSequence([0.1], [2])

    def test_validates_lengths(self):
        with pytest.raises(InvalidInputError):
            LabeledSequence([0.1, 0.2], [1])

    def test_rejects_empty(self):
        with pytest.raises(InvalidInputError):
            LabeledSequence([], [])

    def test_iteration(self):
        seq = LabeledSequence([0.1, 0.2], [1, -1])
        assert [(e.x, e.y) for e in seq] == [(0.1, 1), (0.2, -1)]


class TestBestInHindsight:
    def test_tie_resolves_to_smallest_id(self):
        pool = ExpertPool([constant_hypothesis(1), constant_hypothesis(-1)])
        seq = LabeledSequence([0.1, 0.2, 0.3, 0.4], [1, -1, 1, -1])
        best, gain = best_in_hindsight(pool, seq)
        assert gain == 0.0
        assert best.id == "const+1"

    def test_simple_majority(self):
        pool = ExpertPool([constant_hypothesis(1), constant_hypothesis(-1)])
        seq = LabeledSequence([0.1, 0.2, 0.3], [1, 1, -1])
        best, gain = best_in_hindsight(pool, seq)
        assert (best.id, gain) == ("const+1", 1.0)

    def test_matches_independent_scan(self):
        # independent oracle: plain-python rescan of every pool member
        rng = RngStream(5, 0)
        xs = rng.uniforms(300)
        flips = rng.uniforms(300)
        ys = np.where(xs >= 0.37, 1, -1) * np.where(flips < 0.2, -1, 1)
        seq = LabeledSequence(xs, ys)
        grid = np.linspace(0.0, 1.0, 32)
        pool = ExpertPool([threshold_stump(t, s) for t in grid for s in (1, -1)])
        _, gain = best_in_hindsight(pool, seq)

        best_scan = -10**9
        for h in pool.members:
            g = 0
            for t in range(len(seq)):
                g += h.predict(float(xs[t])) * int(ys[t])
            best_scan = max(best_scan, g)
        assert gain == best_scan
