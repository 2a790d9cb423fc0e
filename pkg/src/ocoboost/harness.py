"""Experiment harness: scripted adversaries, multi-seed sweeps with
honest confidence margins, and byte-stable CSV traces.

Every sequence is generated from an explicit stream, so a sweep is a
pure function of its seed list and re-running one writes the same
bytes.
"""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass

import numpy as np

from ocoboost.boost_online import OnlineBoosterConfig, data_stream_id, run_online
from ocoboost.boost_stat import DATA_STREAM, stat_boost
from ocoboost.core import (
    ExpertPool,
    InvalidInputError,
    LabeledSequence,
    RngStream,
    threshold_stump,
)

ADVERSARY_KINDS = (
    "constant",
    "alternating",
    "threshold-realizable",
    "noisy-threshold",
    "drifting-threshold",
    "uniform-random",
)

_DRIFT_THETAS = (0.25, 0.75)


@dataclass(frozen=True)
class AdversarySpec:
    """A label-generation policy over uniform instances on [0, 1)."""

    kind: str
    horizon: int
    param: float = None

    def __post_init__(self):
        if self.kind not in ADVERSARY_KINDS:
            raise InvalidInputError(f"unknown adversary {self.kind!r}")
        if self.horizon < 1:
            raise InvalidInputError("horizon must be at least 1")
        p = self.param
        if self.kind == "constant" and p is not None and p not in (-1, 1):
            raise InvalidInputError("constant adversary takes a label, -1 or +1")
        if self.kind == "threshold-realizable" and p is not None and not 0.0 <= p <= 1.0:
            raise InvalidInputError("threshold must lie in [0, 1]")
        if self.kind == "noisy-threshold" and p is not None and not 0.0 <= p <= 0.5:
            raise InvalidInputError("noise rate must lie in [0, 0.5]")
        if self.kind == "drifting-threshold" and p is not None and (p < 1 or p != int(p)):
            raise InvalidInputError("switch period must be a positive integer")
        if self.kind in ("alternating", "uniform-random") and p is not None:
            raise InvalidInputError(f"{self.kind} takes no parameter")


def parse_adversary(text: str, horizon: int) -> AdversarySpec:
    """Parse the command syntax name[:param]."""
    name, _, raw = text.partition(":")
    param = None
    if raw:
        try:
            param = float(raw)
        except ValueError:
            raise InvalidInputError(f"bad adversary parameter {raw!r}")
    return AdversarySpec(kind=name, horizon=horizon, param=param)


def generate_sequence(spec: AdversarySpec, rng: RngStream) -> LabeledSequence:
    """Instances first, then whatever label draws the policy needs."""
    t = spec.horizon
    xs = rng.uniforms(t)
    kind, p = spec.kind, spec.param
    if kind == "constant":
        ys = np.full(t, 1 if p is None else int(p), dtype=np.int64)
    elif kind == "alternating":
        ys = np.where(np.arange(t) % 2 == 0, 1, -1)
    elif kind == "threshold-realizable":
        theta = 0.5 if p is None else float(p)
        ys = np.where(xs >= theta, 1, -1)
    elif kind == "noisy-threshold":
        rate = 0.2 if p is None else float(p)
        base = np.where(xs >= 0.5, 1, -1)
        flips = rng.uniforms(t) < rate
        ys = np.where(flips, -base, base)
    elif kind == "drifting-threshold":
        period = max(1, t // 4) if p is None else int(p)
        thetas = np.where((np.arange(t) // period) % 2 == 0,
                          _DRIFT_THETAS[0], _DRIFT_THETAS[1])
        ys = np.where(xs >= thetas, 1, -1)
    else:
        ys = np.where(rng.uniforms(t) < 0.5, 1, -1)
    return LabeledSequence(xs, ys)


def signed_threshold_pool(n_thresholds: int) -> ExpertPool:
    """Both orientations of stumps on an even grid over [0, 1]."""
    if n_thresholds < 1:
        raise InvalidInputError("need at least one threshold")
    members = []
    for theta in np.linspace(0.0, 1.0, n_thresholds):
        members.append(threshold_stump(float(theta), 1))
        members.append(threshold_stump(float(theta), -1))
    return ExpertPool(members)


# --- sweeps -------------------------------------------------------------------

_MIN_SEEDS = 10


@dataclass
class ExperimentReport:
    """A seed sweep summarized against one bound, with a 3-sigma margin."""

    name: str
    metric: str
    per_seed: np.ndarray
    bound: float
    direction: str
    wall_time: float
    traces: list

    @property
    def mean(self) -> float:
        return float(np.mean(self.per_seed))

    @property
    def std(self) -> float:
        return float(np.std(self.per_seed, ddof=1))

    @property
    def ci(self) -> float:
        return 3.0 * self.std / np.sqrt(len(self.per_seed))

    @property
    def passed(self) -> bool:
        if self.direction == "upper":
            return self.mean <= self.bound + self.ci
        return self.mean >= self.bound - self.ci

    def describe(self) -> str:
        cmp = "<=" if self.direction == "upper" else ">="
        return (f"{self.name}: {self.metric} mean {self.mean:.4f} +- {self.ci:.4f} "
                f"{cmp} {self.bound:.4f} over {len(self.per_seed)} seeds "
                f"[{'pass' if self.passed else 'FAIL'}] ({self.wall_time:.1f}s)")


def _check_seeds(seeds):
    seeds = [int(s) for s in seeds]
    if len(seeds) < _MIN_SEEDS:
        raise InvalidInputError(f"need at least {_MIN_SEEDS} seeds for a report")
    if len(set(seeds)) != len(seeds):
        raise InvalidInputError("seeds must be distinct")
    return seeds


def run_online_experiment(config: OnlineBoosterConfig, adversary: AdversarySpec,
                          pool: ExpertPool, seeds, name: str = "online") -> ExperimentReport:
    """Final regret per seed against the theoretical regret curve."""
    seeds = _check_seeds(seeds)
    if adversary.horizon != config.horizon:
        raise InvalidInputError("adversary and booster horizons differ")
    t0 = time.perf_counter()
    traces, per_seed = [], []
    for s in seeds:
        data = RngStream(s, data_stream_id(config.n_learners))
        seq = generate_sequence(adversary, data)
        cfg = dataclasses.replace(config, master_seed=s)
        trace = run_online(cfg, seq, pool)
        traces.append(trace)
        per_seed.append(trace.final_regret)
    return ExperimentReport(
        name=name,
        metric="final regret",
        per_seed=np.array(per_seed),
        bound=float(traces[0].bound[-1]),
        direction="upper",
        wall_time=time.perf_counter() - t0,
        traces=traces,
    )


def draw_stat_sample(adversary: AdversarySpec, data_seed: int) -> LabeledSequence:
    """The training sample for a batch sweep, drawn once from its own stream."""
    return generate_sequence(adversary, RngStream(data_seed, DATA_STREAM))


def run_stat_experiment(sample: LabeledSequence, trainer_factory, gamma: float,
                        m0: int, t_rounds: int, mode: str, seeds, floor: float,
                        name: str = "stat") -> ExperimentReport:
    """Final sample correlation per seed against a guarantee floor."""
    seeds = _check_seeds(seeds)
    t0 = time.perf_counter()
    results, per_seed = [], []
    for s in seeds:
        res = stat_boost(sample, trainer_factory, gamma=gamma, m0=m0,
                         t_rounds=t_rounds, mode=mode, master_seed=s)
        results.append(res)
        per_seed.append(float(res.cor_trace[-1]))
    return ExperimentReport(
        name=name,
        metric="sample correlation",
        per_seed=np.array(per_seed),
        bound=float(floor),
        direction="lower",
        wall_time=time.perf_counter() - t0,
        traces=results,
    )


# --- trace files --------------------------------------------------------------

ONLINE_CSV_HEADER = "seed,t,cum_gain,best_hindsight_gain,cum_regret,theory_bound"
STAT_CSV_HEADER = "seed,t,cor_S"


def _fmt(v: float) -> str:
    v = float(v)
    if v == 0.0:
        v = 0.0  # never print -0
    return f"{v:.9f}"


def write_online_csv(path, seeds, traces) -> None:
    """Rows ordered by (seed, t); floats printed to nine places."""
    with open(path, "w", newline="") as f:
        f.write(ONLINE_CSV_HEADER + "\n")
        for s, trace in zip(seeds, traces):
            regret = trace.cum_regret
            for t in range(len(trace)):
                f.write(f"{int(s)},{t + 1},{_fmt(trace.cum_gain[t])},"
                        f"{_fmt(trace.best_gain[t])},{_fmt(regret[t])},"
                        f"{_fmt(trace.bound[t])}\n")


def write_stat_csv(path, seeds, results) -> None:
    with open(path, "w", newline="") as f:
        f.write(STAT_CSV_HEADER + "\n")
        for s, res in zip(seeds, results):
            for t, cor in enumerate(res.cor_trace, start=1):
                f.write(f"{int(s)},{t},{_fmt(cor)}\n")
