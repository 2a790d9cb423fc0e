"""Online boosting: a randomized majority vote over N weak learners whose
feed probabilities are tuned by a fresh N-step descent every round.

Two execution paths produce identical traces.  The generic path drives
arbitrary learner objects through the public ops and is the reference;
the hedge path runs a bank of diluted-hedge learners through one
compiled kernel per round, which is what makes desk-scale sweeps
(thousands of rounds times thousands of learners) affordable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from ocoboost.core import (
    ConfigurationError,
    ExpertPool,
    InvalidInputError,
    Label,
    LabeledSequence,
    ProtocolError,
    RngStream,
    vote_project,
)
from ocoboost.oco import LinearLoss, interval, oco_new, oco_next, oco_update, ogd_regret_bound
from ocoboost.weaklearn import (
    HedgeLearner,
    HedgeSpec,
    PrescientOracle,
    PrescientSpec,
    hedge_declared_regret,
    hedge_new,
)

AGNOSTIC = "agnostic"
REALIZABLE = "realizable"

# stream-id layout per run: learner i (1-based) owns id i, the shared
# feed/relabel stream follows the learners, then the vote stream, then
# data generation


def learner_stream_id(i: int) -> int:
    return i


def relabel_stream_id(n_learners: int) -> int:
    return n_learners + 1


def vote_stream_id(n_learners: int) -> int:
    return n_learners + 2


def data_stream_id(n_learners: int) -> int:
    return n_learners + 3


@dataclass(frozen=True)
class OnlineBoosterConfig:
    """Wiring for one boosted run.

    weak_learner is a HedgeSpec, a PrescientSpec, or a factory
    callable (index, stream, horizon) -> learner.  force_generic pins
    the reference path even when the hedge kernel applies.
    """

    n_learners: int
    gamma: float
    horizon: int
    mode: str
    weak_learner: object
    master_seed: int = 0
    force_generic: bool = False

    def __post_init__(self):
        if self.n_learners < 1:
            raise InvalidInputError("need at least one weak learner")
        if self.horizon < 1:
            raise InvalidInputError("horizon must be at least 1")
        if not 0.0 < self.gamma <= 1.0:
            raise InvalidInputError("gamma must lie in (0, 1]")
        if self.mode not in (AGNOSTIC, REALIZABLE):
            raise InvalidInputError(f"unknown mode {self.mode!r}")
        if isinstance(self.weak_learner, PrescientSpec) and self.mode != REALIZABLE:
            raise ConfigurationError(
                "a label-peeking oracle is only sound when the booster forwards "
                "unmodified labels; wire it to realizable mode")
        if not isinstance(self.weak_learner, (HedgeSpec, PrescientSpec)) and not callable(self.weak_learner):
            raise ConfigurationError("weak_learner must be a spec or a factory callable")


def _descent_constants(config: OnlineBoosterConfig):
    """Domain, start point, and gradient bound of the per-round descent."""
    g = 2.0 / config.gamma
    if config.mode == AGNOSTIC:
        return interval(-1.0, 1.0), 0.0, g, 2.0
    return interval(0.0, 1.0), 0.5, g, 1.0


@dataclass
class RoundRecord:
    """Everything one update produced, for inspection at small scale."""

    t: int
    x: float
    y: Label
    y_hat: Label
    predictions: np.ndarray
    plays: np.ndarray
    coefficients: np.ndarray

    @property
    def losses(self) -> np.ndarray:
        return self.plays * self.coefficients


@dataclass
class RegretTrace:
    """Per-round cumulative gains against the hindsight benchmark."""

    cum_gain: np.ndarray
    best_gain: np.ndarray
    bound: np.ndarray
    clip_count: int
    gamma: float
    n_learners: int
    records: list | None = None

    @property
    def cum_regret(self) -> np.ndarray:
        return self.best_gain - self.cum_gain

    @property
    def final_regret(self) -> float:
        return float(self.cum_regret[-1])

    def __len__(self) -> int:
        return len(self.cum_gain)


class OnlineBooster:
    """Step-level interface: predict(x) then update(x, y), once per round.

    Querying twice without an update, or updating without a pending
    prediction, is a protocol error; each weak learner is consulted
    exactly once per round and the answers are cached for the update.
    """

    def __init__(self, config: OnlineBoosterConfig, base_labels=None):
        self.config = config
        n = config.n_learners
        self._relabel = RngStream(config.master_seed, relabel_stream_id(n))
        self._vote = RngStream(config.master_seed, vote_stream_id(n))
        self.learners = _build_learners(config, base_labels)
        self._pending = None
        self._t = 0
        self.clip_count = 0
        dom, init, g, _ = _descent_constants(config)
        self._dom, self._init, self._g = dom, init, g

    def predict(self, x: float) -> Label:
        if self._pending is not None:
            raise ProtocolError("predict called twice without an update")
        if self._t >= self.config.horizon:
            raise ProtocolError("horizon exhausted")
        preds = np.fromiter((lrn.predict(x) for lrn in self.learners),
                            dtype=np.int64, count=len(self.learners))
        z = int(preds.sum()) / (self.config.gamma * self.config.n_learners)
        y_hat = vote_project(z, self._vote)
        self._pending = (x, preds, y_hat)
        return y_hat

    def update(self, x: float, y: Label) -> RoundRecord:
        if self._pending is None:
            raise ProtocolError("update called before predict")
        px, preds, y_hat = self._pending
        if x != px:
            raise ProtocolError("update instance differs from the predicted one")
        self._pending = None
        self._t += 1

        n, gamma = self.config.n_learners, self.config.gamma
        agnostic = self.config.mode == AGNOSTIC
        state = oco_new(self._dom, horizon=n, grad_bound=self._g, initial=[self._init])
        plays = np.empty(n)
        coeffs = np.empty(n)
        for i in range(n):
            p = float(oco_next(state)[0])
            plays[i] = p
            c = (int(preds[i]) * y) / gamma - 1.0
            coeffs[i] = c
            oco_update(state, LinearLoss([c]))
            if agnostic:
                yi = y if self._relabel.uniform() < (1.0 + p) * 0.5 else -y
                self.learners[i].update(x, yi)
            elif self._relabel.uniform() < p:
                self.learners[i].update(x, y)
        self.clip_count += state.clip_count
        return RoundRecord(t=self._t, x=x, y=y, y_hat=y_hat,
                           predictions=preds, plays=plays, coefficients=coeffs)


def _build_learners(config: OnlineBoosterConfig, base_labels):
    n, t = config.n_learners, config.horizon
    spec = config.weak_learner
    streams = [RngStream(config.master_seed, learner_stream_id(i)) for i in range(1, n + 1)]
    if isinstance(spec, HedgeSpec):
        return [HedgeLearner(spec.pool, spec.gamma, t, s) for s in streams]
    if isinstance(spec, PrescientSpec):
        if base_labels is None:
            raise ConfigurationError("a label-peeking oracle needs the label sequence up front")
        return [PrescientOracle(base_labels, spec.gamma, s) for s in streams]
    return [spec(i + 1, s, t) for i, s in enumerate(streams)]


def declared_regret_curve(config: OnlineBoosterConfig, ts: np.ndarray) -> np.ndarray:
    """R_W(t) of the configured weak learners along round prefixes."""
    spec = config.weak_learner
    if isinstance(spec, HedgeSpec):
        k = len(spec.pool)
        return np.array([hedge_declared_regret(spec.gamma, k, int(t)) for t in ts])
    if isinstance(spec, PrescientSpec):
        return np.zeros(len(ts))
    probe = spec(1, RngStream(config.master_seed, learner_stream_id(1)), config.horizon)
    return np.array([probe.declared_regret(int(t)) for t in ts])


def regret_bound_curve(config: OnlineBoosterConfig) -> np.ndarray:
    """Theoretical regret bound R_W(t)/gamma + t * R_A(N)/N per prefix."""
    ts = np.arange(1, config.horizon + 1, dtype=np.float64)
    _, _, g, d = _descent_constants(config)
    per_round = ogd_regret_bound(g, d, config.n_learners) / config.n_learners
    return declared_regret_curve(config, ts) / config.gamma + ts * per_round


def best_prefix_gains(pool: ExpertPool, seq: LabeledSequence) -> np.ndarray:
    """max_h sum_{s<=t} h(x_s) y_s for every prefix length t."""
    preds = pool.prediction_matrix(seq.xs).astype(np.int64)
    prefix = np.cumsum(preds * seq.ys[:, None], axis=0)
    return prefix.max(axis=1).astype(np.float64)


def run_online(config: OnlineBoosterConfig, seq: LabeledSequence, pool: ExpertPool,
               record_rounds: bool = False) -> RegretTrace:
    """Boost through the full sequence and report the regret trace.

    The benchmark pool only scores the trace; the weak learners compete
    against whatever pool their own spec carries.
    """
    if len(seq) != config.horizon:
        raise InvalidInputError("sequence length must equal the configured horizon")
    use_kernel = isinstance(config.weak_learner, HedgeSpec) and not config.force_generic
    if use_kernel:
        gains, clip_count, records = _run_hedge_bank(config, seq, record_rounds)
    else:
        gains, clip_count, records = _run_generic(config, seq, record_rounds)
    return RegretTrace(
        cum_gain=np.cumsum(gains).astype(np.float64),
        best_gain=best_prefix_gains(pool, seq),
        bound=regret_bound_curve(config),
        clip_count=clip_count,
        gamma=config.gamma,
        n_learners=config.n_learners,
        records=records,
    )


def _run_generic(config, seq, record_rounds):
    booster = OnlineBooster(config, base_labels=seq.ys)
    gains = np.empty(len(seq), dtype=np.int64)
    records = [] if record_rounds else None
    for t in range(len(seq)):
        x, y = float(seq.xs[t]), int(seq.ys[t])
        y_hat = booster.predict(x)
        rec = booster.update(x, y)
        gains[t] = y_hat * y
        if record_rounds:
            records.append(rec)
    return gains, booster.clip_count, records


# --- compiled hedge bank -----------------------------------------------------


@numba.njit(cache=True)
def _hedge_round(w, rowsum, pool_row, y, gamma, grad_bound, u_dil, u_pay, u_feed,
                 etas, p_init, lo, hi, up, down, agnostic, preds_out, plays_out):
    """One full round over the learner bank; returns (vote sum, clip count).

    Mirrors the generic path draw for draw: per learner one dilution
    coin and one payload draw for the prediction, then the in-round
    descent, then one feed draw deciding the (re)labeled update.
    """
    n, k = w.shape
    pred_sum = 0
    for i in range(n):
        if u_dil[i] < gamma:
            target = u_pay[i] * rowsum[i]
            acc = 0.0
            idx = k - 1
            for j in range(k):
                acc += w[i, j]
                if acc > target:
                    idx = j
                    break
            pred = pool_row[idx]
        else:
            pred = 1 if u_pay[i] < 0.5 else -1
        preds_out[i] = pred
        pred_sum += pred

    clip_count = 0
    p = p_init
    for i in range(n):
        plays_out[i] = p
        c = (preds_out[i] * y) / gamma - 1.0
        if abs(c) > grad_bound:
            clip_count += 1
            c = grad_bound if c > 0 else -grad_bound
        if agnostic:
            yi = y if u_feed[i] < (1.0 + p) * 0.5 else -y
            feed = True
        else:
            yi = y
            feed = u_feed[i] < p
        if feed:
            s = 0.0
            if yi > 0:
                for j in range(k):
                    v = w[i, j] * (up if pool_row[j] > 0 else down)
                    w[i, j] = v
                    s += v
            else:
                for j in range(k):
                    v = w[i, j] * (down if pool_row[j] > 0 else up)
                    w[i, j] = v
                    s += v
            total = 0.0
            for j in range(k):
                v = w[i, j] / s
                w[i, j] = v
                total += v
            rowsum[i] = total
        p = p - etas[i] * c
        if p > hi:
            p = hi
        elif p < lo:
            p = lo
    return pred_sum, clip_count


_PREDRAW_CHUNK = 512


def _run_hedge_bank(config, seq, record_rounds):
    n, t_max, gamma = config.n_learners, config.horizon, config.gamma
    spec: HedgeSpec = config.weak_learner
    k = len(spec.pool)
    proto = hedge_new(spec.pool, gamma, t_max)

    dom, p_init, g, _ = _descent_constants(config)
    lo, hi = float(dom.lower[0]), float(dom.upper[0])
    agnostic = config.mode == AGNOSTIC
    etas = dom.diameter / (g * np.sqrt(np.arange(1, n + 1, dtype=np.float64)))

    learner_streams = [RngStream(config.master_seed, learner_stream_id(i)) for i in range(1, n + 1)]
    relabel = RngStream(config.master_seed, relabel_stream_id(n))
    vote = RngStream(config.master_seed, vote_stream_id(n))

    w = np.full((n, k), 1.0 / k)
    rowsum = np.cumsum(w, axis=1)[:, -1].copy()
    pool_preds = spec.pool.prediction_matrix(seq.xs)

    gains = np.empty(t_max, dtype=np.int64)
    preds = np.empty(n, dtype=np.int64)
    plays = np.empty(n, dtype=np.float64)
    records = [] if record_rounds else None
    clip_count = 0
    buf = np.empty((n, min(_PREDRAW_CHUNK, t_max), 2))

    for t in range(t_max):
        b = t % _PREDRAW_CHUNK
        if b == 0:
            nb = min(_PREDRAW_CHUNK, t_max - t)
            for i in range(n):
                buf[i, :nb] = learner_streams[i].uniforms(2 * nb).reshape(nb, 2)
        u_dil = np.ascontiguousarray(buf[:, b, 0])
        u_pay = np.ascontiguousarray(buf[:, b, 1])
        u_feed = relabel.uniforms(n)

        y = int(seq.ys[t])
        pred_sum, clipped = _hedge_round(
            w, rowsum, pool_preds[t], y, gamma, g, u_dil, u_pay, u_feed,
            etas, p_init, lo, hi, proto.up, proto.down, agnostic, preds, plays)
        clip_count += clipped
        z = int(pred_sum) / (gamma * n)
        y_hat = vote_project(z, vote)
        gains[t] = y_hat * y
        if record_rounds:
            coeffs = (preds * y) / gamma - 1.0
            records.append(RoundRecord(t=t + 1, x=float(seq.xs[t]), y=y, y_hat=y_hat,
                                       predictions=preds.copy(), plays=plays.copy(),
                                       coefficients=coeffs))
    return gains, clip_count, records
