"""Weak learners: diluted exponential weights, stump ERM, and a
label-peeking oracle for controlled experiments.

Dilution means the learner only consults its expert pool with
probability gamma and otherwise answers with a fair coin, which scales
both its edge and its declared regret by gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import numpy as np

from ocoboost.core import (
    ContractViolationError,
    ExpertPool,
    Hypothesis,
    InvalidInputError,
    Label,
    RngStream,
    constant_hypothesis,
    threshold_stump,
)


@runtime_checkable
class OnlineWeakLearner(Protocol):
    advantage: float

    def predict(self, x: float) -> Label: ...

    def update(self, x: float, y: Label) -> None: ...

    def declared_regret(self, horizon: int) -> float: ...


# --- diluted exponential weights -------------------------------------------


@dataclass(frozen=True)
class HedgeState:
    """Immutable snapshot of an exponential-weights learner.

    weights always sum to one.  up/down cache exp(+-eta) so updates
    multiply by the exact same scalars everywhere.
    """

    pool: ExpertPool
    weights: np.ndarray
    eta: float
    gamma: float
    up: float
    down: float


def hedge_new(pool: ExpertPool, gamma: float, horizon: int, eta: float | None = None) -> HedgeState:
    if not 0.0 <= gamma <= 1.0:
        raise InvalidInputError("gamma must lie in [0, 1]")
    if horizon < 1:
        raise InvalidInputError("horizon must be at least 1")
    k = len(pool)
    if eta is None:
        # gain-scale rate: the +-1 payoff range doubles the usual {0,1}
        # loss range, so sqrt(2 ln K / T) is what backs the declared regret
        eta = math.sqrt(2.0 * math.log(k) / horizon)
    w = np.full(k, 1.0 / k)
    return HedgeState(pool=pool, weights=w, eta=float(eta), gamma=float(gamma),
                      up=math.exp(eta), down=math.exp(-eta))


def hedge_predict(state: HedgeState, x: float, rng: RngStream) -> Label:
    """Sample a prediction; consumes exactly two draws.

    The first draw is the dilution coin.  The second is either the
    expert sample (undiluted path) or a fair sign coin (diluted path).
    """
    if rng.uniform() < state.gamma:
        k = rng.weighted_index(state.weights)
        return int(state.pool.members[k].predict(x))
    return 1 if rng.uniform() < 0.5 else -1


def hedge_update(state: HedgeState, x: float, y: Label) -> HedgeState:
    """Reweight multiplicatively by exp(eta * h_k(x) * y) and renormalize."""
    row = state.pool.prediction_row(x)
    factors = np.where(row * y > 0, state.up, state.down)
    w = state.weights * factors
    # left-to-right total, so sampling totals agree bitwise across backends
    w = w / np.cumsum(w)[-1]
    return HedgeState(pool=state.pool, weights=w, eta=state.eta, gamma=state.gamma,
                      up=state.up, down=state.down)


def hedge_declared_regret(gamma: float, pool_size: int, horizon: int) -> float:
    """The guarantee gamma * sqrt(2 T ln K); zero for a single expert."""
    if pool_size < 1 or horizon < 0:
        raise InvalidInputError("pool_size must be >= 1 and horizon >= 0")
    if pool_size == 1:
        return 0.0
    return gamma * math.sqrt(2.0 * horizon * math.log(pool_size))


class HedgeLearner:
    """Protocol adapter owning a HedgeState and its stream."""

    def __init__(self, pool: ExpertPool, gamma: float, horizon: int, rng: RngStream):
        self.state = hedge_new(pool, gamma, horizon)
        self.rng = rng
        self.advantage = float(gamma)

    def predict(self, x: float) -> Label:
        return hedge_predict(self.state, x, self.rng)

    def update(self, x: float, y: Label) -> None:
        self.state = hedge_update(self.state, x, y)

    def declared_regret(self, horizon: int) -> float:
        return hedge_declared_regret(self.advantage, len(self.state.pool), horizon)


@dataclass(frozen=True)
class HedgeSpec:
    """Declarative request for one diluted-hedge learner per booster slot.

    Boosters recognize this spec and run a vectorized bank with
    identical draw semantics to a HedgeLearner per slot.
    """

    pool: ExpertPool
    gamma: float

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise InvalidInputError("booster weak learners need gamma in (0, 1]")


# --- label-peeking oracle ----------------------------------------------------


def prescient_oracle_predict(labels: np.ndarray, t: int, gamma: float, rng: RngStream) -> Label:
    """Answer the true label y_t with probability (1+gamma)/2; one draw."""
    y = int(labels[t])
    return y if rng.uniform() < (1.0 + gamma) * 0.5 else -y


@dataclass(frozen=True)
class PrescientSpec:
    """Oracle that peeks at the incoming label.

    Only meaningful when the booster forwards unmodified labels, i.e.
    in realizable online mode; any other wiring is a configuration
    error that boosters must reject.
    """

    gamma: float

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise InvalidInputError("gamma must lie in (0, 1]")


class PrescientOracle:
    """One-step-ahead oracle; predict() advances its round counter."""

    def __init__(self, labels: np.ndarray, gamma: float, rng: RngStream):
        self.labels = np.asarray(labels, dtype=np.int64)
        self.advantage = float(gamma)
        self.rng = rng
        self._t = 0

    def predict(self, x: float) -> Label:
        if self._t >= len(self.labels):
            raise InvalidInputError("ran past the provided label sequence")
        y = prescient_oracle_predict(self.labels, self._t, self.advantage, self.rng)
        self._t += 1
        return y

    def update(self, x: float, y: Label) -> None:
        # receiving anything but the base label means the host relabeled,
        # which voids the oracle's guarantee
        if y != int(self.labels[self._t - 1]):
            raise ContractViolationError("prescient oracle fed a relabeled example")

    def declared_regret(self, horizon: int) -> float:
        return 0.0


# --- stump empirical risk minimization --------------------------------------


def declared_epsilon0(grid_size: int, m0: int) -> float:
    """Estimation slack sqrt(2 ln(2 * grid) / m0) declared by stump ERM."""
    if grid_size < 1 or m0 < 1:
        raise InvalidInputError("grid_size and m0 must be positive")
    return math.sqrt(2.0 * math.log(2.0 * grid_size) / m0)


def stump_erm_train(xs, ys, grid, gamma: float, rng: RngStream) -> Hypothesis:
    """Diluted ERM over signed threshold stumps.

    With probability gamma, return the empirical-gain maximizer over
    {s * sign(x - theta): theta in grid, s in +-1}, ties resolving to
    the smallest theta and then to s = +1.  Otherwise return a
    random-sign constant hypothesis.  Consumes one dilution draw plus
    one sign draw on the diluted path only.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.int64)
    grid = np.sort(np.asarray(grid, dtype=np.float64))
    if len(xs) == 0 or len(xs) != len(ys):
        raise InvalidInputError("sample must be non-empty with matching labels")
    if len(grid) == 0:
        raise InvalidInputError("threshold grid must be non-empty")
    if not 0.0 <= gamma <= 1.0:
        raise InvalidInputError("gamma must lie in [0, 1]")

    if not rng.coin(gamma):
        return constant_hypothesis(rng.sign_coin(0.5))

    plus_gain = np.where(xs[:, None] >= grid[None, :], 1, -1).T @ ys
    best_theta, best_sign, best_gain = None, 0, None
    for j in range(len(grid)):
        for s, g in ((1, plus_gain[j]), (-1, -plus_gain[j])):
            if best_gain is None or g > best_gain:
                best_theta, best_sign, best_gain = float(grid[j]), s, g
    return threshold_stump(best_theta, best_sign)


class StumpErmLearner:
    """Batch weak learner trained by diluted stump ERM.

    gamma is the declared edge, epsilon0 the declared estimation slack
    for the sample size m0 the booster will feed.
    """

    def __init__(self, grid, gamma: float, m0: int, rng: RngStream):
        self.grid = np.sort(np.asarray(grid, dtype=np.float64))
        if len(self.grid) == 0:
            raise InvalidInputError("threshold grid must be non-empty")
        self.gamma = float(gamma)
        self.m0 = int(m0)
        self.epsilon0 = declared_epsilon0(len(self.grid), self.m0)
        self.rng = rng

    def train(self, xs, ys) -> Hypothesis:
        return stump_erm_train(xs, ys, self.grid, self.gamma, self.rng)
