"""Harness: adversary policies, sweep reports, and trace files."""

import math

import numpy as np
import pytest

from ocoboost.boost_online import OnlineBoosterConfig
from ocoboost.core import InvalidInputError, LabeledSequence, RngStream
from ocoboost.harness import (
    AdversarySpec,
    ExperimentReport,
    ONLINE_CSV_HEADER,
    STAT_CSV_HEADER,
    draw_stat_sample,
    generate_sequence,
    parse_adversary,
    run_online_experiment,
    run_stat_experiment,
    signed_threshold_pool,
    write_online_csv,
    write_stat_csv,
)
from ocoboost.weaklearn import HedgeSpec, StumpErmLearner


class TestAdversarySpec:
    def test_parse_plain_and_with_param(self):
        spec = parse_adversary("noisy-threshold:0.3", 50)
        assert spec.kind == "noisy-threshold" and spec.param == 0.3
        assert parse_adversary("alternating", 50).param is None

    def test_parse_rejects_garbage(self):
        with pytest.raises(InvalidInputError):
            parse_adversary("chaos", 10)
        with pytest.raises(InvalidInputError):
            parse_adversary("noisy-threshold:lots", 10)

    def test_param_ranges(self):
        with pytest.raises(InvalidInputError):
            AdversarySpec("noisy-threshold", 10, 0.7)
        with pytest.raises(InvalidInputError):
            AdversarySpec("threshold-realizable", 10, 1.4)
        with pytest.raises(InvalidInputError):
            AdversarySpec("constant", 10, 0.5)
        with pytest.raises(InvalidInputError):
            AdversarySpec("drifting-threshold", 10, 2.5)
        with pytest.raises(InvalidInputError):
            AdversarySpec("uniform-random", 10, 1.0)


class TestGenerateSequence:
    def test_constant_labels(self):
        seq = generate_sequence(AdversarySpec("constant", 20), RngStream(1, 0))
        assert np.all(seq.ys == 1)
        seq = generate_sequence(AdversarySpec("constant", 20, -1), RngStream(1, 0))
        assert np.all(seq.ys == -1)

    def test_alternating_starts_positive(self):
        seq = generate_sequence(AdversarySpec("alternating", 6), RngStream(1, 0))
        assert seq.ys.tolist() == [1, -1, 1, -1, 1, -1]

    def test_threshold_labels_match_instances(self):
        seq = generate_sequence(AdversarySpec("threshold-realizable", 200, 0.3),
                                RngStream(2, 0))
        assert np.array_equal(seq.ys, np.where(seq.xs >= 0.3, 1, -1))

    def test_noisy_threshold_zero_rate_is_clean(self):
        a = generate_sequence(AdversarySpec("noisy-threshold", 100, 0.0), RngStream(3, 0))
        assert np.array_equal(a.ys, np.where(a.xs >= 0.5, 1, -1))

    def test_noisy_threshold_flip_rate(self):
        t = 4000
        seq = generate_sequence(AdversarySpec("noisy-threshold", t, 0.2), RngStream(4, 0))
        flipped = np.mean(seq.ys != np.where(seq.xs >= 0.5, 1, -1))
        assert abs(flipped - 0.2) < 4 * math.sqrt(0.2 * 0.8 / t)

    def test_drifting_threshold_switches(self):
        seq = generate_sequence(AdversarySpec("drifting-threshold", 40, 10), RngStream(5, 0))
        thetas = np.where((np.arange(40) // 10) % 2 == 0, 0.25, 0.75)
        assert np.array_equal(seq.ys, np.where(seq.xs >= thetas, 1, -1))

    def test_uniform_random_is_balanced(self):
        seq = generate_sequence(AdversarySpec("uniform-random", 4000), RngStream(6, 0))
        assert abs(np.mean(seq.ys)) < 4 / math.sqrt(4000)

    def test_draw_accounting(self):
        rng = RngStream(7, 0)
        generate_sequence(AdversarySpec("threshold-realizable", 30), rng)
        assert rng.draws == 30
        rng = RngStream(7, 0)
        generate_sequence(AdversarySpec("noisy-threshold", 30), rng)
        assert rng.draws == 60

    def test_same_stream_same_sequence(self):
        spec = AdversarySpec("noisy-threshold", 50, 0.1)
        a = generate_sequence(spec, RngStream(9, 3))
        b = generate_sequence(spec, RngStream(9, 3))
        assert np.array_equal(a.xs, b.xs) and np.array_equal(a.ys, b.ys)


class TestPool:
    def test_signed_pool_size_and_ends(self):
        pool = signed_threshold_pool(32)
        assert len(pool) == 64
        ids = [h.id for h in pool.members]
        assert len(set(ids)) == 64
        assert any(i.startswith("thr+0.000000") for i in ids)
        assert any(i.startswith("thr+1.000000") for i in ids)

    def test_needs_a_threshold(self):
        with pytest.raises(InvalidInputError):
            signed_threshold_pool(0)


class TestReports:
    def _report(self, per_seed, bound, direction):
        return ExperimentReport(name="n", metric="m", per_seed=np.array(per_seed),
                                bound=bound, direction=direction, wall_time=0.1,
                                traces=[])

    def test_upper_direction_pass_and_fail(self):
        assert self._report([1.0, 2.0, 3.0], 2.5, "upper").passed
        assert not self._report([5.0, 5.1, 4.9], 2.0, "upper").passed

    def test_lower_direction(self):
        assert self._report([0.9, 0.8, 0.85], 0.8, "lower").passed
        assert not self._report([0.1, 0.2, 0.15], 0.8, "lower").passed

    def test_ci_is_three_sigma(self):
        r = self._report([1.0, 2.0, 3.0], 0.0, "upper")
        assert math.isclose(r.std, 1.0)
        assert math.isclose(r.ci, 3.0 / math.sqrt(3))

    def test_describe_mentions_verdict(self):
        assert "[pass]" in self._report([1.0, 1.0, 1.0], 2.0, "upper").describe()


class TestOnlineExperiment:
    def _config(self, t=30, n=10):
        pool = signed_threshold_pool(2)
        return OnlineBoosterConfig(n, 0.5, t, "agnostic", HedgeSpec(pool, 0.5)), pool

    def test_minimum_seed_count(self):
        cfg, pool = self._config()
        adv = AdversarySpec("noisy-threshold", 30)
        with pytest.raises(InvalidInputError):
            run_online_experiment(cfg, adv, pool, seeds=range(9))

    def test_distinct_seeds_required(self):
        cfg, pool = self._config()
        adv = AdversarySpec("noisy-threshold", 30)
        with pytest.raises(InvalidInputError):
            run_online_experiment(cfg, adv, pool, seeds=[1] * 10)

    def test_horizon_mismatch_rejected(self):
        cfg, pool = self._config(t=30)
        adv = AdversarySpec("noisy-threshold", 29)
        with pytest.raises(InvalidInputError):
            run_online_experiment(cfg, adv, pool, seeds=range(10))

    def test_report_shape_and_determinism(self):
        cfg, pool = self._config()
        adv = AdversarySpec("noisy-threshold", 30)
        r1 = run_online_experiment(cfg, adv, pool, seeds=range(10))
        r2 = run_online_experiment(cfg, adv, pool, seeds=range(10))
        assert len(r1.per_seed) == 10
        assert np.array_equal(r1.per_seed, r2.per_seed)
        assert r1.direction == "upper"
        assert r1.bound == r1.traces[0].bound[-1]
        assert r1.wall_time > 0
        assert all(t.clip_count == 0 for t in r1.traces)


class TestStatExperiment:
    def test_realizable_sweep(self):
        sample = draw_stat_sample(AdversarySpec("threshold-realizable", 60), data_seed=100)
        grid = np.linspace(0.0, 1.0, 8)
        factory = lambda rng: StumpErmLearner(grid, 1.0, 15, rng)
        floor = 1.0 - 3.0 / math.sqrt(40)
        rep = run_stat_experiment(sample, factory, gamma=1.0, m0=15, t_rounds=40,
                                  mode="realizable", seeds=range(10), floor=floor)
        assert rep.direction == "lower"
        assert len(rep.per_seed) == 10
        assert rep.passed

    def test_sample_is_reused_across_seeds(self):
        a = draw_stat_sample(AdversarySpec("noisy-threshold", 30, 0.1), data_seed=5)
        b = draw_stat_sample(AdversarySpec("noisy-threshold", 30, 0.1), data_seed=5)
        assert np.array_equal(a.xs, b.xs) and np.array_equal(a.ys, b.ys)


class TestCsv:
    def _mini_report(self):
        pool = signed_threshold_pool(2)
        cfg = OnlineBoosterConfig(6, 0.5, 12, "agnostic", HedgeSpec(pool, 0.5))
        adv = AdversarySpec("noisy-threshold", 12)
        return run_online_experiment(cfg, adv, pool, seeds=range(10))

    def test_online_csv_layout(self, tmp_path):
        rep = self._mini_report()
        path = tmp_path / "trace.csv"
        write_online_csv(path, range(10), rep.traces)
        lines = path.read_text().splitlines()
        assert lines[0] == ONLINE_CSV_HEADER
        assert len(lines) == 1 + 10 * 12
        first = lines[1].split(",")
        assert first[0] == "0" and first[1] == "1"
        for field in first[2:]:
            whole, frac = field.split(".")
            assert len(frac) == 9
        seeds = [int(l.split(",")[0]) for l in lines[1:]]
        assert seeds == sorted(seeds)

    def test_online_csv_bytes_stable(self, tmp_path):
        rep = self._mini_report()
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_online_csv(p1, range(10), rep.traces)
        write_online_csv(p2, range(10), self._mini_report().traces)
        assert p1.read_bytes() == p2.read_bytes()
        assert b"\r" not in p1.read_bytes()

    def test_stat_csv_layout(self, tmp_path):
        sample = draw_stat_sample(AdversarySpec("threshold-realizable", 30), data_seed=1)
        grid = np.linspace(0.0, 1.0, 4)
        factory = lambda rng: StumpErmLearner(grid, 1.0, 8, rng)
        rep = run_stat_experiment(sample, factory, gamma=1.0, m0=8, t_rounds=20,
                                  mode="realizable", seeds=range(10), floor=0.0)
        path = tmp_path / "stat.csv"
        write_stat_csv(path, range(10), rep.traces)
        lines = path.read_text().splitlines()
        assert lines[0] == STAT_CSV_HEADER
        assert len(lines) == 1 + 10 * 20
        assert lines[1].split(",")[:2] == ["0", "1"]
