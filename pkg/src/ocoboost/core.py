"""Shared vocabulary for the boosting reductions.

Labels are +-1 integers, instances are real scalars.  The randomized
majority vote, correlation bookkeeping, hindsight benchmarks, and the
seeded stream type used across every module live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

Label = int
Instance = float

# sign convention used everywhere: sign(0) := +1


class InvalidInputError(ValueError):
    """Raised when an argument violates an operation's stated domain."""


class ProtocolError(RuntimeError):
    """Raised when calls arrive in an order the contract forbids."""


class ConfigurationError(ValueError):
    """Raised when components are wired together in an unsupported way."""


class ContractViolationError(RuntimeError):
    """Raised when a collaborator's output breaks its declared contract."""


class UnsupportedSizeError(ValueError):
    """Raised when a problem size exceeds what an operation supports."""


class RngStream:
    """Deterministic random stream keyed by (seed, stream_id).

    Each stream is owned by exactly one logical consumer.  The pair
    (seed, stream_id) fully determines the draw sequence, and bulk
    draws consume the identical underlying values as repeated scalar
    draws, so buffered and unbuffered consumers can be coupled.
    """

    __slots__ = ("seed", "stream_id", "draws", "_gen")

    def __init__(self, seed: int, stream_id: int):
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.draws = 0
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        self._gen = np.random.default_rng(ss)

    def uniform(self) -> float:
        self.draws += 1
        return float(self._gen.random())

    def uniforms(self, n: int) -> np.ndarray:
        self.draws += int(n)
        return self._gen.random(int(n))

    def coin(self, p: float) -> bool:
        """One draw; True with probability p."""
        return self.uniform() < p

    def sign_coin(self, p_plus: float) -> Label:
        """One draw; +1 with probability p_plus, else -1."""
        return 1 if self.uniform() < p_plus else -1

    def weighted_index(self, weights: np.ndarray) -> int:
        """One draw; index k with probability weights[k] / sum(weights)."""
        cdf = np.cumsum(weights)
        target = self.uniform() * cdf[-1]
        idx = int(np.searchsorted(cdf, target, side="right"))
        return min(idx, len(cdf) - 1)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


def as_label(value) -> Label:
    v = int(value)
    if v != value or v not in (-1, 1):
        raise InvalidInputError(f"label must be -1 or +1, got {value!r}")
    return v


@dataclass(frozen=True)
class LabeledExample:
    x: Instance
    y: Label


class LabeledSequence:
    """Ordered (instance, label) pairs, materialized up front."""

    __slots__ = ("xs", "ys")

    def __init__(self, xs, ys):
        xs = np.asarray(xs, dtype=np.float64)
        ys = np.asarray(ys, dtype=np.int64)
        if xs.ndim != 1 or ys.ndim != 1 or len(xs) != len(ys):
            raise InvalidInputError("xs and ys must be 1-d and equal length")
        if len(xs) == 0:
            raise InvalidInputError("empty sequence")
        if not np.all(np.isfinite(xs)):
            raise InvalidInputError("instances must be finite")
        if not np.all(np.abs(ys) == 1):
            raise InvalidInputError("labels must be -1 or +1")
        self.xs = xs
        self.ys = ys

    def __len__(self) -> int:
        return len(self.xs)

    def __getitem__(self, t: int) -> LabeledExample:
        return LabeledExample(float(self.xs[t]), int(self.ys[t]))

    def __iter__(self) -> Iterator[LabeledExample]:
        for t in range(len(self.xs)):
            yield self[t]


class Hypothesis:
    """Deterministic +-1 predictor with a stable identifier."""

    __slots__ = ("id", "_fn", "_batch")

    def __init__(self, hid: str, fn: Callable[[Instance], Label], batch=None):
        self.id = str(hid)
        self._fn = fn
        self._batch = batch

    def predict(self, x: Instance) -> Label:
        return self._fn(x)

    def predict_batch(self, xs: np.ndarray) -> np.ndarray:
        if self._batch is not None:
            return self._batch(np.asarray(xs, dtype=np.float64))
        return np.fromiter((self._fn(float(x)) for x in xs), dtype=np.int8, count=len(xs))

    def __repr__(self) -> str:
        return f"Hypothesis({self.id!r})"


def constant_hypothesis(sign: int) -> Hypothesis:
    s = as_label(sign)
    return Hypothesis(
        f"const{s:+d}",
        lambda x, s=s: s,
        lambda xs, s=s: np.full(len(xs), s, dtype=np.int8),
    )


def threshold_stump(theta: float, sign: int) -> Hypothesis:
    """The stump x -> sign * sign(x - theta), with sign(0) := +1."""
    s = as_label(sign)
    th = float(theta)

    def fn(x: Instance, th=th, s=s) -> Label:
        return s if x >= th else -s

    def batch(xs: np.ndarray, th=th, s=s) -> np.ndarray:
        return np.where(xs >= th, s, -s).astype(np.int8)

    return Hypothesis(f"thr{th:+.6f}{'+' if s > 0 else '-'}", fn, batch)


class ExpertPool:
    """Finite ordered hypothesis class with unique ids."""

    __slots__ = ("members",)

    def __init__(self, members):
        members = tuple(members)
        if not members:
            raise InvalidInputError("pool must be non-empty")
        ids = [h.id for h in members]
        if len(set(ids)) != len(ids):
            raise InvalidInputError("pool ids must be unique")
        self.members = members

    def __len__(self) -> int:
        return len(self.members)

    def prediction_row(self, x: Instance) -> np.ndarray:
        return np.fromiter((h.predict(x) for h in self.members), dtype=np.int8, count=len(self.members))

    def prediction_matrix(self, xs: np.ndarray) -> np.ndarray:
        """Stacked predictions, shape (len(xs), len(pool)), entries +-1."""
        xs = np.asarray(xs, dtype=np.float64)
        out = np.empty((len(xs), len(self.members)), dtype=np.int8)
        for k, h in enumerate(self.members):
            out[:, k] = h.predict_batch(xs)
        return out


def _require_finite(z) -> float:
    z = float(z)
    if not np.isfinite(z):
        raise InvalidInputError(f"vote score must be finite, got {z!r}")
    return z


def vote_project(z, rng: RngStream) -> Label:
    """Project a real vote score onto a +-1 label.

    Deterministic sign for |z| >= 1 (consuming no draws); otherwise one
    draw resolves +1 with probability (1+z)/2.  The expected output is
    vote_expectation(z) for every finite z.
    """
    z = _require_finite(z)
    if z >= 1.0:
        return 1
    if z <= -1.0:
        return -1
    return rng.sign_coin((1.0 + z) * 0.5)


def vote_expectation(z) -> float:
    """Mean of vote_project(z): the clamp of z to [-1, 1]."""
    z = _require_finite(z)
    return float(min(1.0, max(-1.0, z)))


def correlation(predictions, labels) -> float:
    """Average agreement (1/m) * sum of prediction*label over the pairs.

    Products of +-1 values sum exactly in float64, so the result does
    not depend on accumulation order.
    """
    a = np.asarray(predictions, dtype=np.int64)
    b = np.asarray(labels, dtype=np.int64)
    if a.ndim != 1 or b.ndim != 1 or len(a) != len(b):
        raise InvalidInputError("predictions and labels must be 1-d and equal length")
    if len(a) == 0:
        raise InvalidInputError("empty sequences")
    if not (np.all(np.abs(a) == 1) and np.all(np.abs(b) == 1)):
        raise InvalidInputError("entries must be -1 or +1")
    return float(np.dot(a, b)) / len(a)


def best_in_hindsight(pool: ExpertPool, seq: LabeledSequence) -> tuple[Hypothesis, float]:
    """Exhaustively find the pool member with the largest gain sum(h(x_t)*y_t).

    Ties resolve to the lexicographically smallest id.
    """
    preds = pool.prediction_matrix(seq.xs).astype(np.int64)
    gains = preds.T @ seq.ys
    best_gain = int(gains.max())
    best = min((h for h, g in zip(pool.members, gains) if g == best_gain), key=lambda h: h.id)
    return best, float(best_gain)
