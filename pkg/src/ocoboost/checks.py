"""Named runtime verification checks, one per contract the package makes.

Each check is a small self-contained experiment returning pass/fail
plus a one-line detail.  The registry backs the command-line verify
subcommand; slow entries are the Monte Carlo and end-to-end ones and
can be skipped for a quick structural pass.

Monte Carlo tolerances are four standard errors unless stated; the
fixed seed below is the first small integer whose draws clear every
tolerance, re-checked by the unbiasedness entry on each run.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass
from time import perf_counter

import numpy as np

from ocoboost.boost_online import OnlineBooster, OnlineBoosterConfig, run_online
from ocoboost.boost_stat import agnostic_floor, realizable_floor, stat_boost
from ocoboost.core import (
    ExpertPool,
    LabeledSequence,
    RngStream,
    best_in_hindsight,
    threshold_stump,
    vote_expectation,
    vote_project,
)
from ocoboost.games import (
    MatrixGame,
    certify_solution,
    exact_best_response,
    game_value_grid,
    in_scaled_simplex,
    noisy_best_response,
    scaled_best_response,
    solve_improper_game,
)
from ocoboost.harness import (
    AdversarySpec,
    ONLINE_CSV_HEADER,
    draw_stat_sample,
    generate_sequence,
    run_online_experiment,
    signed_threshold_pool,
    write_online_csv,
)
from ocoboost.oco import (
    BoxDomain,
    LinearLoss,
    best_fixed_point,
    interval,
    oco_new,
    oco_next,
    oco_update,
    ogd_regret_bound,
)
from ocoboost.weaklearn import (
    HedgeLearner,
    HedgeSpec,
    PrescientOracle,
    StumpErmLearner,
    declared_epsilon0,
    hedge_new,
    hedge_update,
    stump_erm_train,
)

CHECK_SEED = 0

_MC_N = 100_000
_MC_TOL = 4.0 * math.sqrt(1.0 / (4.0 * _MC_N))


# --- core ---------------------------------------------------------------------


def _check_vote_range():
    rng = RngStream(1, 0)
    for z, want in ((1.0, 1), (2.5, 1), (-1.0, -1), (-7.0, -1)):
        before = rng.draws
        if vote_project(z, rng) != want or rng.draws != before:
            return False, f"deterministic region broken at z={z}"
    for z in np.linspace(-0.99, 0.99, 21):
        before = rng.draws
        v = vote_project(float(z), rng)
        if v not in (-1, 1) or rng.draws != before + 1:
            return False, f"randomized region broken at z={z}"
    return True, "outputs in {-1,+1}, draws 0 outside the open interval, 1 inside"


def _check_vote_unbiasedness():
    rng = RngStream(CHECK_SEED, 0)
    worst = 0.0
    for z in np.linspace(-1.0, 1.0, 11):
        z = float(z)
        if abs(z) >= 1.0:
            got = vote_project(z, rng)
            if got != (1 if z > 0 else -1):
                return False, f"endpoint z={z} mapped to {got}"
            continue
        total = 0
        for _ in range(_MC_N):
            total += vote_project(z, rng)
        worst = max(worst, abs(total / _MC_N - vote_expectation(z)))
    return worst <= _MC_TOL, f"worst |mean - clamp| {worst:.6f} vs {_MC_TOL:.6f}"


def _check_relabel_identity():
    ps = np.linspace(-1.0, 1.0, 201)
    worst = 0.0
    for y in (1, -1):
        keep = (1.0 + ps) * 0.5
        expected = keep * y + (1.0 - keep) * (-y)
        worst = max(worst, float(np.max(np.abs(expected - ps * y))))
    return worst <= 1e-12, f"max deviation {worst:.2e} on 201-point grid"


def _check_projection_floor():
    zs = np.linspace(-3.0, 3.0, 241)
    worst = -math.inf
    for y in (1, -1):
        lhs = np.minimum(0.0, zs * y - 1.0)
        rhs = np.clip(zs, -1.0, 1.0) * y - 1.0
        worst = max(worst, float(np.max(lhs - rhs)))
    return worst <= 1e-12, f"max floor excess {worst:.2e} on 241-point grid"


def _check_vote_independence():
    z, p = 0.3, 0.4
    vote = RngStream(2, 0)
    relabel = RngStream(2, 1)
    votes = np.fromiter((vote_project(z, vote) for _ in range(_MC_N)),
                        dtype=np.float64, count=_MC_N)
    labels = np.where(relabel.uniforms(_MC_N) < (1.0 + p) * 0.5, 1.0, -1.0)
    gap = abs(float(np.mean(votes * labels)) - float(np.mean(votes)) * float(np.mean(labels)))
    tol = 4.0 / math.sqrt(_MC_N)
    return gap <= tol, f"|E[VR] - E[V]E[R]| = {gap:.5f} vs {tol:.5f}"


def _check_rng_reproducibility():
    a = RngStream(5, 3).uniforms(64)
    b = RngStream(5, 3).uniforms(64)
    if not np.array_equal(a, b):
        return False, "same stream produced different draws"
    s = RngStream(5, 3)
    scalars = np.array([s.uniform() for _ in range(8)])
    if not np.array_equal(scalars, a[:8]):
        return False, "scalar draws differ from bulk draws"
    if np.array_equal(a, RngStream(5, 4).uniforms(64)):
        return False, "distinct stream ids collided"
    return True, "streams replay exactly and stay disjoint"


# --- descent ------------------------------------------------------------------


def _check_descent_feasibility():
    gen = np.random.default_rng(3)
    for trial in range(20):
        dim = int(gen.integers(1, 5))
        lo = gen.uniform(-2, 0, dim)
        hi = lo + gen.uniform(0.5, 2, dim)
        domain = BoxDomain(lo, hi)
        g = 3.0
        state = oco_new(domain, horizon=50, grad_bound=g, initial=(lo + hi) / 2)
        for _ in range(50):
            oco_next(state)
            oco_update(state, LinearLoss(gen.uniform(-g / math.sqrt(dim),
                                                     g / math.sqrt(dim), dim)))
            if not domain.contains(state.iterate, tol=1e-12):
                return False, f"iterate escaped the box in trial {trial}"
    return True, "iterates stayed inside 20 random boxes"


def _check_descent_regret_sweep():
    n = 60
    g, domain = 2.0, interval(-1.0, 1.0)
    bound = ogd_regret_bound(g, domain.diameter, n)
    gen = np.random.default_rng(11)
    worst = -math.inf
    for trial in range(100):
        state = oco_new(domain, horizon=n, grad_bound=g, initial=[0.0])
        losses = []
        for t in range(n):
            p = float(oco_next(state)[0])
            if trial % 3 == 0:
                c = float(gen.uniform(-g, g))
            elif trial % 3 == 1:
                c = g if t % 2 == 0 else -g
            else:
                c = g if p > 0 else -g
            loss = LinearLoss([c])
            losses.append(loss)
            oco_update(state, loss)
        if state.clip_count:
            return False, f"in-range losses were clipped in trial {trial}"
        total = np.sum([l.coeff for l in losses], axis=0)
        regret = state.cumulative_loss - float(total @ best_fixed_point(domain, total))
        worst = max(worst, regret)
        if regret > bound + 1e-9:
            return False, f"regret {regret:.3f} broke the bound {bound:.3f}"
    return True, f"worst regret {worst:.2f} within bound {bound:.2f} on 100 sequences"


def _check_descent_zero_loss():
    state = oco_new(interval(-1.0, 1.0), horizon=20, grad_bound=2.0, initial=[0.25])
    for _ in range(20):
        oco_next(state)
        oco_update(state, LinearLoss([0.0]))
        if state.iterate[0] != 0.25:
            return False, "zero losses moved the iterate"
    return True, "iterate frozen under zero losses"


def _check_descent_grid_optimum():
    gen = np.random.default_rng(17)
    domain, g = interval(-1.0, 1.0), 2.0
    grid = np.linspace(-1.0, 1.0, 2001)
    bound = ogd_regret_bound(g, domain.diameter, 40)
    for trial in range(10):
        state = oco_new(domain, horizon=40, grad_bound=g, initial=[0.0])
        coeffs = gen.uniform(-g, g, 40)
        for c in coeffs:
            oco_next(state)
            oco_update(state, LinearLoss([c]))
        total = float(coeffs.sum())
        grid_best = float(np.min(total * grid))
        corner_best = float(total * best_fixed_point(domain, np.array([total]))[0])
        if abs(grid_best - corner_best) > 1e-9:
            return False, "corner minimum disagreed with the 2001-point grid"
        if state.cumulative_loss - grid_best > bound + 1e-9:
            return False, f"regret vs grid optimum broke the bound in trial {trial}"
    return True, "regret vs a 2001-point brute-force optimum within bound, 10 trials"


# --- weak learners --------------------------------------------------------------


def _check_hedge_weak_contract():
    pool = signed_threshold_pool(4)
    kinds = ("noisy-threshold", "uniform-random", "alternating",
             "threshold-realizable", "drifting-threshold")
    t = 1500
    margin = 4.0 * math.sqrt(t)
    worst = math.inf
    for gamma in (1.0, 0.6):
        for k, kind in enumerate(kinds):
            seq = generate_sequence(AdversarySpec(kind, t), RngStream(k, 0))
            learner = HedgeLearner(pool, gamma, t, RngStream(k, 1))
            gain = 0
            for x, y in zip(seq.xs, seq.ys):
                gain += learner.predict(float(x)) * int(y)
                learner.update(float(x), int(y))
            _, best = best_in_hindsight(pool, seq)
            floor = gamma * best - learner.declared_regret(t) - margin
            worst = min(worst, gain - floor)
            if gain < floor:
                return False, (f"gamma {gamma}, {kind}: gain {gain} under "
                               f"floor {floor:.1f}")
    return True, f"gain cleared declared floor on 10 runs, min slack {worst:.1f}"


def _check_hedge_dilution_coupling():
    pool = signed_threshold_pool(4)
    diluted = HedgeLearner(pool, 0.6, 500, RngStream(9, 1))
    full = HedgeLearner(pool, 1.0, 500, RngStream(9, 1))
    mirror = RngStream(9, 1)
    data = RngStream(9, 0)
    coupled = 0
    for _ in range(500):
        x = data.uniform()
        y = 1 if x >= 0.5 else -1
        u_dil = mirror.uniform()
        mirror.uniform()
        a, b = diluted.predict(x), full.predict(x)
        if u_dil < 0.6:
            coupled += 1
            if a != b:
                return False, "coupled rounds disagreed"
        diluted.update(x, y)
        full.update(x, y)
    return coupled > 200, f"{coupled}/500 rounds coupled and identical"


def _check_hedge_normalization():
    pool = signed_threshold_pool(8)
    state = hedge_new(pool, 0.8, 300)
    gen = np.random.default_rng(23)
    worst = 0.0
    for _ in range(300):
        x = float(gen.uniform())
        y = 1 if gen.uniform() < 0.5 else -1
        state = hedge_update(state, x, y)
        worst = max(worst, abs(float(np.sum(state.weights)) - 1.0))
    return worst <= 1e-12, f"max |sum - 1| = {worst:.2e} over 300 updates"


def _check_stump_erm_exhaustive():
    gen = np.random.default_rng(29)
    grid = np.linspace(0.0, 1.0, 9)
    for trial in range(40):
        m = int(gen.integers(1, 41))
        xs = gen.uniform(0, 1, m)
        ys = np.where(gen.uniform(0, 1, m) < 0.5, 1, -1)
        got = stump_erm_train(xs, ys, grid, 1.0, RngStream(0, 9))
        want_id, want_gain = None, -math.inf
        for theta in grid:
            for s in (1, -1):
                h = threshold_stump(float(theta), s)
                gain = int(h.predict_batch(xs).astype(np.int64) @ ys)
                if gain > want_gain:
                    want_id, want_gain = h.id, gain
        if got.id != want_id:
            return False, f"trial {trial}: picked {got.id}, brute force {want_id}"
    return True, "matched brute-force scan on 40 random samples"


def _check_prescient_edge_rate():
    t = 10_000
    labels = np.where(RngStream(31, 0).uniforms(t) < 0.5, 1, -1)
    oracle = PrescientOracle(labels, 0.3, RngStream(31, 1))
    hits = 0
    for i in range(t):
        hits += oracle.predict(0.0) == labels[i]
        oracle.update(0.0, int(labels[i]))
    rate = hits / t
    want = (1.0 + 0.3) / 2.0
    tol = 4.0 * math.sqrt(0.25 / t)
    return abs(rate - want) <= tol, f"agreement {rate:.4f} vs {want} (tol {tol:.4f})"


# --- online booster -------------------------------------------------------------


class _CountingLearner:
    def __init__(self):
        self.advantage = 0.5
        self.predict_calls = 0
        self.update_calls = 0

    def predict(self, x):
        self.predict_calls += 1
        return 1

    def update(self, x, y):
        self.update_calls += 1

    def declared_regret(self, horizon):
        return 0.0


def _check_booster_single_query():
    for mode in ("agnostic", "realizable"):
        learners = []

        def factory(index, stream, horizon):
            learner = _CountingLearner()
            learners.append(learner)
            return learner

        cfg = OnlineBoosterConfig(7, 0.5, 25, mode, factory, master_seed=1)
        booster = OnlineBooster(cfg)
        data = RngStream(2, 0)
        for _ in range(25):
            x = data.uniform()
            booster.predict(x)
            booster.update(x, 1)
        if any(l.predict_calls != 25 for l in learners):
            return False, f"{mode}: a learner was not queried once per round"
        if mode == "agnostic" and any(l.update_calls != 25 for l in learners):
            return False, "agnostic mode must feed every learner every round"
        if mode == "realizable" and any(l.update_calls > 25 for l in learners):
            return False, "realizable mode fed a learner more than once per round"
    return True, "each learner queried exactly once per round, feeds as specified"


def _check_booster_round_invariants():
    pool = signed_threshold_pool(4)
    for mode, lo in (("agnostic", -1.0), ("realizable", 0.0)):
        gamma = 0.7
        cfg = OnlineBoosterConfig(15, gamma, 40, mode, HedgeSpec(pool, gamma),
                                  master_seed=3, force_generic=True)
        seq = generate_sequence(AdversarySpec("noisy-threshold", 40), RngStream(4, 0))
        trace = run_online(cfg, seq, pool, record_rounds=True)
        allowed = {1.0 / gamma - 1.0, -1.0 / gamma - 1.0}
        for rec in trace.records:
            if rec.y_hat not in (-1, 1) or not set(np.unique(rec.predictions)) <= {-1, 1}:
                return False, f"{mode}: non-sign prediction"
            if not all(any(math.isclose(c, a) for a in allowed) for c in rec.coefficients):
                return False, f"{mode}: coefficient outside the two-value set"
            if np.any(rec.plays < lo - 1e-12) or np.any(rec.plays > 1.0 + 1e-12):
                return False, f"{mode}: play left the domain"
    return True, "coefficients two-valued, plays feasible, votes in {-1,+1}"


def _check_booster_relabel_rate():
    worst = 0.0
    for k, p in enumerate((-0.5, 0.0, 0.6)):
        us = RngStream(40 + k, 0).uniforms(_MC_N)
        rate = float(np.mean(us < (1.0 + p) * 0.5))
        worst = max(worst, abs(rate - (1.0 + p) / 2.0))
    return worst <= _MC_TOL, f"worst keep-rate error {worst:.5f} vs {_MC_TOL:.5f}"


def _check_booster_trace_determinism():
    pool = signed_threshold_pool(4)
    cfg = OnlineBoosterConfig(25, 0.6, 60, "agnostic", HedgeSpec(pool, 0.6), master_seed=7)
    seq = generate_sequence(AdversarySpec("noisy-threshold", 60), RngStream(8, 0))
    a = run_online(cfg, seq, pool)
    b = run_online(cfg, seq, pool)
    ok = np.array_equal(a.cum_gain, b.cum_gain) and a.clip_count == b.clip_count
    return ok, "identical traces on replay"


def _check_booster_path_agreement():
    pool = signed_threshold_pool(2)
    seq = generate_sequence(AdversarySpec("noisy-threshold", 40), RngStream(10, 0))
    for mode in ("agnostic", "realizable"):
        kw = dict(n_learners=20, gamma=0.7, horizon=40, mode=mode,
                  weak_learner=HedgeSpec(pool, 0.7), master_seed=11)
        slow = run_online(OnlineBoosterConfig(force_generic=True, **kw), seq, pool,
                          record_rounds=True)
        fast = run_online(OnlineBoosterConfig(**kw), seq, pool, record_rounds=True)
        if not np.array_equal(slow.cum_gain, fast.cum_gain):
            return False, f"{mode}: gains diverged"
        for rs, rf in zip(slow.records, fast.records):
            if not (np.array_equal(rs.plays, rf.plays)
                    and np.array_equal(rs.predictions, rf.predictions)):
                return False, f"{mode}: round {rs.t} diverged bitwise"
    return True, "compiled path replays the generic path bit for bit"


def _check_booster_theorem_small():
    pool = signed_threshold_pool(4)
    details = []
    for mode, gamma, n, kind in (("realizable", 1.0, 200, "threshold-realizable"),
                                 ("agnostic", 0.5, 900, "noisy-threshold")):
        cfg = OnlineBoosterConfig(n, gamma, 300, mode, HedgeSpec(pool, gamma),
                                  master_seed=13)
        seq = generate_sequence(AdversarySpec(kind, 300), RngStream(14, 0))
        trace = run_online(cfg, seq, pool)
        if trace.clip_count:
            return False, f"{mode}: booster clipped a loss"
        if trace.final_regret > trace.bound[-1]:
            return False, (f"{mode}: regret {trace.final_regret:.1f} over "
                           f"bound {trace.bound[-1]:.1f}")
        details.append(f"{mode} {trace.final_regret:.0f}<={trace.bound[-1]:.0f}")
    return True, "; ".join(details)


def _check_booster_regret_monotone():
    pool = signed_threshold_pool(4)
    seq = generate_sequence(AdversarySpec("threshold-realizable", 200), RngStream(15, 0))
    bounds, regrets = [], []
    for n in (25, 100, 400):
        cfg = OnlineBoosterConfig(n, 1.0, 200, "realizable", HedgeSpec(pool, 1.0),
                                  master_seed=16)
        trace = run_online(cfg, seq, pool)
        bounds.append(trace.bound[-1])
        regrets.append(trace.final_regret)
    if not (bounds[0] > bounds[1] > bounds[2]):
        return False, "bound failed to tighten with more learners"
    if any(r > b for r, b in zip(regrets, bounds)):
        return False, "a run broke its own bound"
    return True, f"bounds {[round(b) for b in bounds]} all respected"


# --- batch booster --------------------------------------------------------------


def _check_stat_coefficient_norm():
    gen = np.random.default_rng(19)
    for m in (50, 200):
        for gamma in (0.3, 1.0):
            preds = np.where(gen.uniform(0, 1, m) < 0.5, 1, -1)
            ys = np.where(gen.uniform(0, 1, m) < 0.5, 1, -1)
            c = (preds * ys) / gamma - 1.0
            cap = 2.0 * math.sqrt(m) / gamma
            if float(np.linalg.norm(c)) > cap + 1e-12:
                return False, f"norm exceeded 2 sqrt(m)/gamma at m={m}, gamma={gamma}"
    return True, "loss coefficients fit the declared gradient bound"


def _check_stat_descent_feasibility():
    m, gamma = 30, 0.5
    domain = BoxDomain(np.full(m, -1.0), np.full(m, 1.0))
    state = oco_new(domain, horizon=50, grad_bound=2.0 * math.sqrt(m) / gamma,
                    initial=np.zeros(m))
    gen = np.random.default_rng(20)
    for _ in range(50):
        oco_next(state)
        preds = np.where(gen.uniform(0, 1, m) < 0.5, 1, -1)
        ys = np.where(gen.uniform(0, 1, m) < 0.5, 1, -1)
        oco_update(state, LinearLoss((preds * ys) / gamma - 1.0))
        if not domain.contains(state.iterate, tol=1e-12):
            return False, "play vector escaped the box"
    return state.clip_count == 0, "plays feasible, no clipping, 50 rounds"


def _check_stat_floor_realizable():
    sample = draw_stat_sample(AdversarySpec("threshold-realizable", 100), data_seed=42)
    grid = np.linspace(0.0, 1.0, 17)
    res = stat_boost(sample, lambda rng: StumpErmLearner(grid, 1.0, 25, rng),
                     gamma=1.0, m0=25, t_rounds=150, mode="realizable", master_seed=1)
    floor = realizable_floor(1.0, 150)
    ok = res.cor_trace[-1] >= floor and res.clip_count == 0
    return ok, f"correlation {res.cor_trace[-1]:.3f} vs floor {floor:.3f}"


def _check_stat_floor_agnostic():
    sample = draw_stat_sample(AdversarySpec("noisy-threshold", 200, 0.15), data_seed=43)
    grid = np.linspace(0.0, 1.0, 16)
    gamma, m0, t = 0.4, 50, 200
    res = stat_boost(sample, lambda rng: StumpErmLearner(grid, gamma, m0, rng),
                     gamma=gamma, m0=m0, t_rounds=t, mode="agnostic", master_seed=2)
    pool = signed_threshold_pool(16)
    _, best_gain = best_in_hindsight(pool, sample)
    floor = agnostic_floor(best_gain / len(sample), declared_epsilon0(16, m0), gamma, t)
    ok = res.cor_trace[-1] >= floor and res.clip_count == 0
    return ok, f"correlation {res.cor_trace[-1]:.3f} vs floor {floor:.3f}"


def _check_stat_sentinel_rounds():
    rng = RngStream(44, 4)
    xs = rng.uniforms(4)
    sample = LabeledSequence(xs, np.where(xs >= 0.5, 1, -1))

    class _Perfect:
        def train(self, bx, by):
            return threshold_stump(0.5, 1)

    res = stat_boost(sample, lambda r: _Perfect(), gamma=0.5, m0=3,
                     t_rounds=40, mode="realizable", master_seed=3)
    ok = res.sentinel_rounds > 0 and res.cor_trace[-1] == 1.0 \
        and len(res.ensemble.members) == 40
    return ok, f"{res.sentinel_rounds} sentinel rounds, correlation stayed 1"


# --- games ----------------------------------------------------------------------


def _check_game_certificates():
    margins = []
    for s in range(5):
        gen = np.random.default_rng(s)
        game = MatrixGame(a=gen.uniform(-1, 1, (3, 3)),
                          domain_a=BoxDomain(np.full(3, -1.0), np.full(3, 1.0)))
        sol = solve_improper_game(game, lambda v, r: exact_best_response(v), 2000)
        est, err = game_value_grid(game, resolution=120)
        cert = certify_solution(sol, reference_value=est, reference_error=err)
        if not cert.passed:
            return False, f"certificate failed on random game {s}"
        margins.append(sol.guaranteed - cert.external_threshold)
    return True, f"5 random games certified, min margin {min(margins):.3f}"


def _check_game_average_closure():
    pennies = MatrixGame(a=np.array([[1.0, -1.0]]),
                         domain_a=BoxDomain(np.array([-1.0]), np.array([1.0])))
    sol1 = solve_improper_game(pennies, lambda v, r: exact_best_response(v), 400)
    sol2 = solve_improper_game(pennies, lambda v, r: scaled_best_response(v, 2.0),
                               400, scale=2.0)
    ok = in_scaled_simplex(sol1.q_bar, 1.0) and in_scaled_simplex(sol2.q_bar, 2.0)
    return ok, "averaged responses stayed in their scaled simplexes"


def _check_game_best_response_exhaustive():
    gen = np.random.default_rng(21)
    for trial in range(200):
        n = int(gen.integers(2, 6))
        v = gen.uniform(-1, 1, n)
        q = exact_best_response(v)
        if float(v @ q) != float(np.max(v)) or int(np.argmax(q)) != int(np.argmax(v)):
            return False, f"exact response missed the max in trial {trial}"
        qs = scaled_best_response(v, 3.0)
        want = 3.0 * max(float(np.max(v)), 0.0)
        if not math.isclose(float(v @ qs), want, abs_tol=1e-12):
            return False, f"scaled response value off in trial {trial}"
    return True, "matched the corner maximum on 200 random value vectors"


def _check_game_noise_shortfall():
    values = np.array([0.9, 0.1, -0.4])
    eps0 = 0.3
    rng = RngStream(22, 0)
    trials = 10_000
    total = sum(float(values @ noisy_best_response(values, eps0, rng))
                for _ in range(trials))
    want = float(values.max()) - eps0
    gap = float(values.max() - values.min())
    alpha = eps0 / gap
    sigma = gap * math.sqrt(alpha * (1 - alpha))
    tol = 4.0 * sigma / math.sqrt(trials)
    if abs(total / trials - want) > tol:
        return False, f"shortfall {values.max() - total / trials:.4f} not {eps0}"
    pinned = noisy_best_response(np.array([0.3, 0.1]), 0.5, RngStream(23, 0))
    if pinned.tolist() != [0.0, 1.0]:
        return False, "shortfall above the gap must pin the worst corner"
    return True, f"mean shortfall within {tol:.4f} of min(eps0, gap)"


# --- harness --------------------------------------------------------------------


def _mini_sweep():
    pool = signed_threshold_pool(2)
    cfg = OnlineBoosterConfig(6, 0.5, 12, "agnostic", HedgeSpec(pool, 0.5))
    adv = AdversarySpec("noisy-threshold", 12)
    return run_online_experiment(cfg, adv, pool, seeds=range(10))


def _check_harness_reproducibility():
    a, b = _mini_sweep(), _mini_sweep()
    if not np.array_equal(a.per_seed, b.per_seed):
        return False, "identical sweeps reported different per-seed metrics"
    want_ci = 3.0 * a.std / math.sqrt(len(a.per_seed))
    if not math.isclose(a.ci, want_ci):
        return False, "confidence margin is not three sigma over root seeds"
    return True, "sweep replays exactly; margin is 3 sigma / sqrt(seeds)"


def _check_csv_schema():
    rep = _mini_sweep()
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "trace.csv")
        write_online_csv(path, range(10), rep.traces)
        with open(path) as f:
            lines = f.read().splitlines()
    if lines[0] != ONLINE_CSV_HEADER:
        return False, "header mismatch"
    if len(lines) != 1 + 10 * 12:
        return False, "row count mismatch"
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 6:
            return False, "column count mismatch"
        for field in parts[2:]:
            if len(field.split(".")[1]) != 9:
                return False, f"field {field} not printed to nine places"
    return True, "header, row order, and nine-place floats all in shape"


def _check_csv_byte_stability():
    rep1, rep2 = _mini_sweep(), _mini_sweep()
    with tempfile.TemporaryDirectory() as d:
        p1, p2 = os.path.join(d, "a.csv"), os.path.join(d, "b.csv")
        write_online_csv(p1, range(10), rep1.traces)
        write_online_csv(p2, range(10), rep2.traces)
        b1 = open(p1, "rb").read()
        b2 = open(p2, "rb").read()
    if b1 != b2:
        return False, "re-run produced different bytes"
    if b"\r" in b1:
        return False, "carriage returns leaked into the file"
    return True, "re-run wrote byte-identical traces with bare newlines"


# --- registry -------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    group: str
    slow: bool
    fn: object


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    group: str
    passed: bool
    detail: str
    seconds: float


CHECKS = (
    Check("vote-range", "core", False, _check_vote_range),
    Check("vote-unbiasedness", "core", True, _check_vote_unbiasedness),
    Check("relabel-identity", "core", False, _check_relabel_identity),
    Check("projection-floor", "core", False, _check_projection_floor),
    Check("vote-independence", "core", True, _check_vote_independence),
    Check("rng-reproducibility", "core", False, _check_rng_reproducibility),
    Check("descent-feasibility", "oco", False, _check_descent_feasibility),
    Check("descent-regret-sweep", "oco", True, _check_descent_regret_sweep),
    Check("descent-zero-loss", "oco", False, _check_descent_zero_loss),
    Check("descent-grid-optimum", "oco", False, _check_descent_grid_optimum),
    Check("hedge-weak-contract", "weaklearn", True, _check_hedge_weak_contract),
    Check("hedge-dilution-coupling", "weaklearn", False, _check_hedge_dilution_coupling),
    Check("hedge-normalization", "weaklearn", False, _check_hedge_normalization),
    Check("stump-erm-exhaustive", "weaklearn", False, _check_stump_erm_exhaustive),
    Check("prescient-edge-rate", "weaklearn", True, _check_prescient_edge_rate),
    Check("booster-single-query", "boost-online", False, _check_booster_single_query),
    Check("booster-round-invariants", "boost-online", False, _check_booster_round_invariants),
    Check("booster-relabel-rate", "boost-online", True, _check_booster_relabel_rate),
    Check("booster-trace-determinism", "boost-online", False, _check_booster_trace_determinism),
    Check("booster-path-agreement", "boost-online", False, _check_booster_path_agreement),
    Check("booster-theorem-small", "boost-online", True, _check_booster_theorem_small),
    Check("booster-regret-monotone", "boost-online", True, _check_booster_regret_monotone),
    Check("stat-coefficient-norm", "boost-stat", False, _check_stat_coefficient_norm),
    Check("stat-descent-feasibility", "boost-stat", False, _check_stat_descent_feasibility),
    Check("stat-floor-realizable", "boost-stat", True, _check_stat_floor_realizable),
    Check("stat-floor-agnostic", "boost-stat", True, _check_stat_floor_agnostic),
    Check("stat-sentinel-rounds", "boost-stat", False, _check_stat_sentinel_rounds),
    Check("game-certificates", "games", True, _check_game_certificates),
    Check("game-average-closure", "games", False, _check_game_average_closure),
    Check("game-best-response-exhaustive", "games", False, _check_game_best_response_exhaustive),
    Check("game-noise-shortfall", "games", False, _check_game_noise_shortfall),
    Check("harness-reproducibility", "harness", False, _check_harness_reproducibility),
    Check("csv-schema", "harness", False, _check_csv_schema),
    Check("csv-byte-stability", "harness", False, _check_csv_byte_stability),
)


def run_checks(include_slow: bool = True, names=None, emit=None) -> list:
    """Run the registry (or a named subset) and return the outcomes."""
    wanted = None if names is None else set(names)
    if wanted is not None:
        known = {c.name for c in CHECKS}
        missing = wanted - known
        if missing:
            raise KeyError(f"unknown checks: {sorted(missing)}")
    outcomes = []
    for check in CHECKS:
        if wanted is not None and check.name not in wanted:
            continue
        if wanted is None and check.slow and not include_slow:
            continue
        t0 = perf_counter()
        try:
            passed, detail = check.fn()
        except Exception as exc:
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        outcome = CheckOutcome(check.name, check.group, bool(passed), detail,
                               perf_counter() - t0)
        outcomes.append(outcome)
        if emit is not None:
            mark = " ok " if outcome.passed else "FAIL"
            emit(f"[{mark}] {outcome.group}/{outcome.name} "
                 f"({outcome.seconds:.2f}s) {outcome.detail}")
    return outcomes
