"""Zero-sum matrix games solved from one side by descent against a
best-response oracle that may overshoot the simplex by a known scale.

The row player picks p from a box and minimizes; the column player
answers from the scaled simplex and maximizes.  Averaging the oracle's
answers yields a mixed column strategy whose worst-case payoff is
certified from the descent's regret bound, with no reference to how
good the oracle actually was.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ocoboost.core import (
    ContractViolationError,
    InvalidInputError,
    RngStream,
    UnsupportedSizeError,
)
from ocoboost.oco import BoxDomain, LinearLoss, oco_new, oco_next, oco_update, ogd_regret_bound

_ORACLE_TOL = 1e-12


@dataclass(frozen=True)
class MatrixGame:
    """Payoff p.T a q + offset.T q over p in domain_a, q in the simplex.

    The offset makes affine column payoffs expressible, which is what a
    two-row simplex game collapses to after eliminating one row weight.
    """

    a: np.ndarray
    domain_a: BoxDomain
    offset: np.ndarray = None

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.float64)
        if a.ndim != 2 or a.size == 0:
            raise InvalidInputError("payoff matrix must be 2-d and non-empty")
        if not np.all(np.isfinite(a)):
            raise InvalidInputError("payoff matrix must be finite")
        offset = self.offset
        if offset is None:
            offset = np.zeros(a.shape[1])
        offset = np.asarray(offset, dtype=np.float64)
        if offset.shape != (a.shape[1],) or not np.all(np.isfinite(offset)):
            raise InvalidInputError("offset must be a finite vector, one entry per column")
        if self.domain_a.dim != a.shape[0]:
            raise InvalidInputError("row domain dimension must match the matrix rows")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "offset", offset)

    @property
    def n_rows(self) -> int:
        return self.a.shape[0]

    @property
    def n_cols(self) -> int:
        return self.a.shape[1]

    def payoff(self, p: np.ndarray, q: np.ndarray) -> float:
        return float(p @ self.a @ q + self.offset @ q)

    def column_values(self, p: np.ndarray) -> np.ndarray:
        return self.a.T @ p + self.offset

    def gradient_bound(self, scale: float = 1.0) -> float:
        return float(scale) * float(np.max(np.linalg.norm(self.a, axis=0)))

    def min_over_rows(self, q: np.ndarray) -> float:
        """Exact min_p of the payoff at fixed q; a box minimum sits on corners."""
        c = self.a @ q
        lo, hi = self.domain_a.lower, self.domain_a.upper
        return float(np.sum(np.minimum(lo * c, hi * c)) + self.offset @ q)


def two_row_game(matrix, lo: float = 0.0, hi: float = 1.0) -> MatrixGame:
    """Collapse a classical 2-row simplex game to one box coordinate.

    With p = (x, 1 - x) the payoff becomes x (row1 - row2) q + row2 q,
    so the box [0, 1] in x reproduces the simplex game exactly.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != 2:
        raise InvalidInputError("need exactly two rows")
    return MatrixGame(a=(m[0] - m[1])[None, :], offset=m[1],
                      domain_a=BoxDomain(np.array([lo]), np.array([hi])))


def load_matrix(text: str) -> np.ndarray:
    """Parse a whitespace matrix, one row per line; blank lines ignored."""
    rows = []
    for line in text.splitlines():
        if line.strip():
            rows.append([float(tok) for tok in line.split()])
    if not rows:
        raise InvalidInputError("no matrix rows found")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InvalidInputError("matrix rows have unequal lengths")
    m = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(m)):
        raise InvalidInputError("matrix entries must be finite")
    return m


# --- column-player oracles ---------------------------------------------------


def exact_best_response(values: np.ndarray) -> np.ndarray:
    """The maximizing simplex corner; ties go to the smallest column."""
    q = np.zeros(len(values))
    q[int(np.argmax(values))] = 1.0
    return q


def scaled_best_response(values: np.ndarray, scale: float) -> np.ndarray:
    """Best response over {q >= 0, sum q <= scale}: a scaled corner or zero."""
    q = np.zeros(len(values))
    j = int(np.argmax(values))
    if values[j] >= 0.0:
        q[j] = float(scale)
    return q


def noisy_best_response(values: np.ndarray, epsilon0: float, rng: RngStream) -> np.ndarray:
    """Best corner mixed with the worst one so the expected payoff falls
    short of optimal by exactly min(epsilon0, gap).  Always one draw."""
    if epsilon0 < 0:
        raise InvalidInputError("epsilon0 must be non-negative")
    best = int(np.argmax(values))
    worst = int(np.argmin(values))
    gap = float(values[best] - values[worst])
    alpha = 0.0 if gap == 0.0 else min(epsilon0 / gap, 1.0)
    pick = worst if rng.uniform() < alpha else best
    q = np.zeros(len(values))
    q[pick] = 1.0
    return q


def in_scaled_simplex(q: np.ndarray, scale: float, tol: float = _ORACLE_TOL) -> bool:
    q = np.asarray(q, dtype=np.float64)
    if q.ndim != 1 or not np.all(np.isfinite(q)):
        return False
    return bool(np.all(q >= -tol) and q.sum() <= scale + tol)


# --- solver and certificate --------------------------------------------------


@dataclass
class GameSolution:
    p_bar: np.ndarray
    q_bar: np.ndarray
    lambda_hat: float
    guaranteed: float
    regret_bound: float
    horizon: int
    scale: float
    clip_count: int


def solve_improper_game(game: MatrixGame, oracle, horizon: int, scale: float = 1.0,
                        rng: RngStream = None) -> GameSolution:
    """Run the descent against the oracle and average both sides.

    oracle(values, rng) must return a vector in the scaled simplex;
    anything outside it is a contract violation, reported with the
    round index.
    """
    if horizon < 1:
        raise InvalidInputError("horizon must be at least 1")
    if scale <= 0:
        raise InvalidInputError("scale must be positive")
    domain = game.domain_a
    center = (domain.lower + domain.upper) * 0.5
    state = oco_new(domain, horizon=horizon, grad_bound=game.gradient_bound(scale),
                    initial=center)
    n = game.n_cols
    q_sum = np.zeros(n)
    p_sum = np.zeros(domain.dim)
    payoff_sum = 0.0
    for t in range(1, horizon + 1):
        p = oco_next(state)
        q = np.asarray(oracle(game.column_values(p), rng), dtype=np.float64)
        if q.shape != (n,) or not in_scaled_simplex(q, scale):
            raise ContractViolationError(
                f"oracle left the scaled simplex at round {t}")
        payoff_sum += game.payoff(p, q)
        q_sum += q
        p_sum += p
        oco_update(state, LinearLoss(game.a @ q))
    q_bar = q_sum / horizon
    return GameSolution(
        p_bar=p_sum / horizon,
        q_bar=q_bar,
        lambda_hat=payoff_sum / horizon,
        guaranteed=game.min_over_rows(q_bar),
        regret_bound=ogd_regret_bound(game.gradient_bound(scale), domain.diameter, horizon),
        horizon=horizon,
        scale=scale,
        clip_count=state.clip_count,
    )


@dataclass(frozen=True)
class Certificate:
    guaranteed: float
    internal_threshold: float
    internal_ok: bool
    external_threshold: float = None
    external_ok: bool = None

    @property
    def passed(self) -> bool:
        return self.internal_ok and (self.external_ok is None or self.external_ok)


def certify_solution(solution: GameSolution, epsilon0: float = 0.0,
                     reference_value: float = None, reference_error: float = 0.0,
                     tol: float = 1e-9) -> Certificate:
    """Check the averaged strategy against what the run itself promises.

    The internal check (worst case of q_bar vs average payoff minus
    regret per round) must hold however sloppy the oracle was.  With a
    reference value the external check additionally allows the oracle's
    declared shortfall epsilon0 and the reference's own error.
    """
    per_round = solution.regret_bound / solution.horizon
    internal = solution.lambda_hat - per_round
    cert = dict(
        guaranteed=solution.guaranteed,
        internal_threshold=internal,
        internal_ok=solution.guaranteed >= internal - tol,
    )
    if reference_value is not None:
        external = reference_value - reference_error - per_round - epsilon0
        cert.update(external_threshold=external,
                    external_ok=solution.guaranteed >= external - tol)
    return Certificate(**cert)


# --- brute-force reference value ---------------------------------------------


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def game_value_grid(game: MatrixGame, resolution: int = 100):
    """Lattice estimate of max_q min_p payoff, with a one-sided error bound.

    The estimate never exceeds the true value; the true value is at most
    estimate + error.  Kept honest by refusing sizes where the lattice
    stops being exhaustive in reasonable time.
    """
    if game.n_rows > 4 or game.n_cols > 4:
        raise UnsupportedSizeError("grid evaluation is limited to 4x4 games")
    if resolution < 11:
        raise InvalidInputError("resolution below 11 is too coarse to report")
    n = game.n_cols
    best = -math.inf
    for counts in _compositions(resolution, n):
        q = np.array(counts, dtype=np.float64) / resolution
        best = max(best, game.min_over_rows(q))
    reach = np.maximum(np.abs(game.domain_a.lower), np.abs(game.domain_a.upper))
    lipschitz = float(np.max(np.abs(game.a).T @ reach + np.abs(game.offset)))
    delta = 2.0 * (n - 1) / resolution
    return best, lipschitz * delta
