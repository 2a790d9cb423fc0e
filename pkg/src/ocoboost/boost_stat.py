"""Batch boosting over a fixed sample: T rounds, each training one weak
hypothesis on a batch resampled according to the current play vector.

The play vector lives in a box over the sample (one coordinate per
example) and is driven by the same descent the online booster uses,
only here the loss coordinates cover the whole sample at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ocoboost.core import (
    ContractViolationError,
    Hypothesis,
    InvalidInputError,
    Label,
    LabeledSequence,
    RngStream,
    constant_hypothesis,
    vote_project,
)
from ocoboost.oco import BoxDomain, LinearLoss, oco_new, oco_next, oco_update

AGNOSTIC = "agnostic"
REALIZABLE = "realizable"

# stream-id layout per run
TRAINER_STREAM = 1
FEED_STREAM = 2
VOTE_STREAM = 3
DATA_STREAM = 4

_SENTINEL_MASS = 1e-12


def realizable_resample(plays: np.ndarray, seq: LabeledSequence, m0: int, rng: RngStream):
    """Draw m0 examples with probability proportional to the play vector.

    Returns None when the plays carry no mass; the caller decides what a
    round without a sampling distribution means.
    """
    if m0 < 1:
        raise InvalidInputError("batch size must be at least 1")
    cdf = np.cumsum(plays)
    total = float(cdf[-1])
    if total <= _SENTINEL_MASS:
        return None
    us = rng.uniforms(m0)
    idx = np.minimum(np.searchsorted(cdf, us * total, side="right"), len(plays) - 1)
    return seq.xs[idx], seq.ys[idx]


def agnostic_resample(plays: np.ndarray, seq: LabeledSequence, m0: int, rng: RngStream):
    """Draw m0 examples uniformly, keeping each label with prob (1 + p_j) / 2."""
    if m0 < 1:
        raise InvalidInputError("batch size must be at least 1")
    m = len(seq)
    idx = np.minimum((rng.uniforms(m0) * m).astype(np.int64), m - 1)
    keep = rng.uniforms(m0) < (1.0 + plays[idx]) * 0.5
    return seq.xs[idx], np.where(keep, seq.ys[idx], -seq.ys[idx]).astype(np.int64)


@dataclass(frozen=True)
class Ensemble:
    """A trained committee voting through the randomized projection."""

    members: tuple
    gamma: float

    def __post_init__(self):
        if len(self.members) == 0:
            raise InvalidInputError("an ensemble needs at least one member")
        if not 0.0 < self.gamma <= 1.0:
            raise InvalidInputError("gamma must lie in (0, 1]")

    def vote_totals(self, xs: np.ndarray) -> np.ndarray:
        totals = np.zeros(len(xs), dtype=np.int64)
        for h in self.members:
            totals += h.predict_batch(xs)
        return totals

    def scores(self, xs: np.ndarray) -> np.ndarray:
        return self.vote_totals(xs) / (self.gamma * len(self.members))

    def predict(self, x: float, rng: RngStream) -> Label:
        z = sum(h.predict(x) for h in self.members) / (self.gamma * len(self.members))
        return vote_project(z, rng)

    def expected_correlation(self, seq: LabeledSequence) -> float:
        clipped = np.clip(self.scores(seq.xs), -1.0, 1.0)
        return float(np.mean(clipped * seq.ys))


@dataclass
class StatBoostResult:
    ensemble: Ensemble
    cor_trace: np.ndarray
    clip_count: int
    sentinel_rounds: int


def _stat_domain(mode: str, m: int):
    if mode == AGNOSTIC:
        return BoxDomain(np.full(m, -1.0), np.full(m, 1.0)), np.zeros(m)
    return BoxDomain(np.zeros(m), np.full(m, 1.0)), np.ones(m)


def stat_boost(seq: LabeledSequence, trainer_factory, gamma: float, m0: int,
               t_rounds: int, mode: str, master_seed: int = 0) -> StatBoostResult:
    """Boost for t_rounds over the sample and report the committee.

    trainer_factory(rng) must yield an object whose train(xs, ys)
    returns a Hypothesis.  In realizable mode a round whose play vector
    has no mass reuses the previous hypothesis, so the descent still
    takes exactly t_rounds steps.
    """
    if mode not in (AGNOSTIC, REALIZABLE):
        raise InvalidInputError(f"unknown mode {mode!r}")
    if not 0.0 < gamma <= 1.0:
        raise InvalidInputError("gamma must lie in (0, 1]")
    if t_rounds < 1:
        raise InvalidInputError("need at least one boosting round")
    m = len(seq)
    trainer = trainer_factory(RngStream(master_seed, TRAINER_STREAM))
    feed = RngStream(master_seed, FEED_STREAM)

    domain, start = _stat_domain(mode, m)
    state = oco_new(domain, horizon=t_rounds, grad_bound=2.0 * math.sqrt(m) / gamma,
                    initial=start)

    members = []
    votes = np.zeros(m, dtype=np.int64)
    cor_trace = np.empty(t_rounds)
    sentinel_rounds = 0
    last = constant_hypothesis(1)
    last_preds = last.predict_batch(seq.xs)

    for t in range(1, t_rounds + 1):
        plays = oco_next(state)
        if mode == AGNOSTIC:
            batch = agnostic_resample(plays, seq, m0, feed)
        else:
            batch = realizable_resample(plays, seq, m0, feed)
        if batch is None:
            sentinel_rounds += 1
        else:
            try:
                last = trainer.train(batch[0], batch[1])
            except Exception as exc:
                raise ContractViolationError(f"weak learner failed at round {t}") from exc
            if not isinstance(last, Hypothesis):
                raise ContractViolationError(f"weak learner returned a non-hypothesis at round {t}")
            last_preds = last.predict_batch(seq.xs)
        members.append(last)
        coeff = (last_preds * seq.ys) / gamma - 1.0
        oco_update(state, LinearLoss(coeff))
        votes += last_preds
        clipped = np.clip(votes / (gamma * t), -1.0, 1.0)
        cor_trace[t - 1] = np.mean(clipped * seq.ys)

    ensemble = Ensemble(members=tuple(members), gamma=gamma)
    return StatBoostResult(ensemble=ensemble, cor_trace=cor_trace,
                           clip_count=state.clip_count, sentinel_rounds=sentinel_rounds)


def realizable_floor(gamma: float, t_rounds: int) -> float:
    """Correlation guarantee 1 - 3 / (gamma sqrt(T)) on the sample."""
    return 1.0 - 3.0 / (gamma * math.sqrt(t_rounds))


def agnostic_floor(best_correlation: float, epsilon0: float, gamma: float,
                   t_rounds: int) -> float:
    """Guarantee best - eps0 / gamma - 6 / (gamma sqrt(T)) on the sample."""
    return best_correlation - epsilon0 / gamma - 6.0 / (gamma * math.sqrt(t_rounds))
