"""Projected online gradient descent over box domains with linear losses.

The optimizer is deliberately tiny: every boosting round builds a fresh
instance, runs it for a fixed horizon, and throws it away, so
construction stays cheap and no state crosses rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ocoboost.core import InvalidInputError, ProtocolError


@dataclass(frozen=True)
class BoxDomain:
    """Axis-aligned box [lower_i, upper_i]^d."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=np.float64))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=np.float64))
        if lo.shape != hi.shape or lo.ndim != 1 or len(lo) == 0:
            raise InvalidInputError("bounds must be equal-length 1-d vectors")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise InvalidInputError("bounds must be finite")
        if np.any(hi < lo):
            raise InvalidInputError("upper bound below lower bound")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.upper - self.lower))

    def clamp(self, x: np.ndarray) -> np.ndarray:
        return np.minimum(self.upper, np.maximum(self.lower, x))

    def contains(self, x, tol: float = 0.0) -> bool:
        x = np.asarray(x, dtype=np.float64)
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))


def interval(lo: float, hi: float) -> BoxDomain:
    return BoxDomain(np.array([lo]), np.array([hi]))


@dataclass(frozen=True)
class LinearLoss:
    """The loss p -> <coeff, p>."""

    coeff: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeff, dtype=np.float64))
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("loss coefficients must be finite")
        object.__setattr__(self, "coeff", c)

    def value(self, p: np.ndarray) -> float:
        return float(np.dot(self.coeff, p))


@dataclass
class OcoState:
    """Projected gradient descent with step size D / (G * sqrt(t)).

    Oversized gradients are clipped to norm grad_bound and counted in
    clip_count rather than rejected; callers that promise bounded
    losses can assert the counter stays at zero.
    """

    domain: BoxDomain
    horizon: int
    grad_bound: float
    iterate: np.ndarray
    step_index: int = 0
    cumulative_loss: float = 0.0
    clip_count: int = 0
    coeff_sum: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.coeff_sum is None:
            self.coeff_sum = np.zeros(self.domain.dim)


def oco_new(domain: BoxDomain, horizon: int, grad_bound: float, initial) -> OcoState:
    if horizon < 1:
        raise InvalidInputError("horizon must be at least 1")
    if not (np.isfinite(grad_bound) and grad_bound > 0):
        raise InvalidInputError("grad_bound must be positive and finite")
    x0 = np.atleast_1d(np.asarray(initial, dtype=np.float64)).copy()
    if x0.shape != (domain.dim,):
        raise InvalidInputError("initial point dimension mismatch")
    if not domain.contains(x0):
        raise InvalidInputError("initial point outside the domain")
    return OcoState(domain=domain, horizon=int(horizon), grad_bound=float(grad_bound), iterate=x0)


def oco_next(state: OcoState) -> np.ndarray:
    """The point to play this step.  Forbidden once the horizon is spent."""
    if state.step_index >= state.horizon:
        raise ProtocolError("horizon exhausted")
    return state.iterate.copy()


def oco_update(state: OcoState, loss: LinearLoss) -> OcoState:
    """Charge the loss at the current iterate, then descend and project."""
    if state.step_index >= state.horizon:
        raise ProtocolError("horizon exhausted")
    coeff = loss.coeff
    if coeff.shape != state.iterate.shape:
        raise InvalidInputError("loss dimension mismatch")
    norm = float(np.linalg.norm(coeff))
    if norm > state.grad_bound:
        coeff = coeff * (state.grad_bound / norm)
        state.clip_count += 1
    state.cumulative_loss += float(np.dot(loss.coeff, state.iterate))
    state.coeff_sum += loss.coeff
    state.step_index += 1
    eta = state.domain.diameter / (state.grad_bound * math.sqrt(state.step_index))
    state.iterate = state.domain.clamp(state.iterate - eta * coeff)
    return state


def ogd_regret_bound(grad_bound: float, diameter: float, horizon: int) -> float:
    """Worst-case regret guarantee (3/2) * G * D * sqrt(N) of this schedule."""
    return 1.5 * grad_bound * diameter * math.sqrt(horizon)


def best_fixed_point(domain: BoxDomain, coeff_sum: np.ndarray) -> np.ndarray:
    """Exact minimizer of <coeff_sum, p> over the box: a corner per axis."""
    take_lower = domain.lower * coeff_sum <= domain.upper * coeff_sum
    return np.where(take_lower, domain.lower, domain.upper)


def oco_realized_regret(state: OcoState, losses) -> float:
    """Cumulative loss minus the best fixed point's loss on the fed sequence."""
    total = np.zeros(state.domain.dim)
    for loss in losses:
        total += loss.coeff
    best = best_fixed_point(state.domain, total)
    return state.cumulative_loss - float(np.dot(total, best))
