"""Full-scale acceptance runs for every guarantee the library makes.

Each criterion exercises one guarantee end to end: the online regret
bounds, the randomized-vote identities, the game solver certificates,
the batch correlation floors, the prescient-oracle mistake rate, the
descent sweep with its clipping contract, and byte determinism of the
trace files.  ``run_all`` executes them in order and prints one
pass/fail line apiece; the test suite and the command line ``verify``
both go through it.  ``quick=True`` shrinks horizons and seed counts
for a fast smoke pass over the same inequalities.
"""

from __future__ import annotations

import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .boost_online import OnlineBoosterConfig, data_stream_id, run_online
from .boost_stat import agnostic_floor, realizable_floor
from .checks import run_checks
from .core import RngStream, best_in_hindsight
from .games import (
    MatrixGame,
    certify_solution,
    exact_best_response,
    game_value_grid,
    noisy_best_response,
    solve_improper_game,
)
from .harness import (
    AdversarySpec,
    draw_stat_sample,
    generate_sequence,
    run_online_experiment,
    run_stat_experiment,
    signed_threshold_pool,
    write_online_csv,
    write_stat_csv,
)
from .oco import BoxDomain
from .weaklearn import HedgeSpec, PrescientSpec, StumpErmLearner, declared_epsilon0

THRESHOLD_GRID = np.linspace(0.0, 1.0, 32)

# (gamma, horizon, learners) per sweep, with a wall budget in seconds each
ONLINE_SWEEPS = ((1.0, 4000, 3600), (0.5, 2000, 2500))
ONLINE_SWEEPS_QUICK = ((1.0, 500, 300), (0.5, 400, 250))
ONLINE_BUDGET = 180.0
ONLINE_NOISE = 0.2

GAME_COUNT, GAME_HORIZON, GAME_RESOLUTION = 50, 10_000, 120
GAME_COUNT_QUICK, GAME_HORIZON_QUICK, GAME_RESOLUTION_QUICK = 8, 2_000, 60
GAME_BUDGET = 60.0
GAME_NOISE = 0.05

VOTE_IDENTITY_CHECKS = ("relabel-identity", "projection-floor",
                        "vote-independence", "vote-unbiasedness")


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _seeds(quick: bool, full: int = 20) -> range:
    return range(10) if quick else range(full)


def online_agnostic_bounds(quick: bool = False) -> tuple[bool, str]:
    """Mean final regret within the declared curve on both big sweeps."""
    sweeps = ONLINE_SWEEPS_QUICK if quick else ONLINE_SWEEPS
    pool = signed_threshold_pool(32)
    parts, ok = [], True
    for gamma, horizon, n_learners in sweeps:
        cfg = OnlineBoosterConfig(n_learners, gamma, horizon, "agnostic",
                                  HedgeSpec(pool, gamma))
        adv = AdversarySpec("noisy-threshold", horizon, ONLINE_NOISE)
        report = run_online_experiment(cfg, adv, pool, _seeds(quick), name="online-agnostic")
        in_budget = report.wall_time <= ONLINE_BUDGET
        ok = ok and report.passed and in_budget
        parts.append(f"gamma={gamma}: mean {report.mean:.1f} +- {report.ci:.1f} "
                     f"vs bound {report.bound:.1f} in {report.wall_time:.0f}s"
                     + ("" if in_budget else " OVER BUDGET"))
    return ok, "; ".join(parts)


def vote_identities(quick: bool = False) -> tuple[bool, str]:
    """The relabeling, projection, and vote checks from the registry."""
    outcomes = run_checks(names=VOTE_IDENTITY_CHECKS)
    ok = all(o.passed for o in outcomes)
    failed = [o.name for o in outcomes if not o.passed]
    detail = (f"{len(outcomes)} identity checks passed" if ok
              else f"failed: {', '.join(failed)}")
    return ok, detail


def game_value_certificates(quick: bool = False) -> tuple[bool, str]:
    """Exact and noisy oracles certified against a grid reference."""
    count = GAME_COUNT_QUICK if quick else GAME_COUNT
    horizon = GAME_HORIZON_QUICK if quick else GAME_HORIZON
    resolution = GAME_RESOLUTION_QUICK if quick else GAME_RESOLUTION
    domain = BoxDomain(np.full(3, -1.0), np.full(3, 1.0))
    t0 = time.perf_counter()
    exact_ok = noisy_ok = 0
    worst = np.inf
    for g_idx in range(count):
        a = np.random.default_rng(g_idx).uniform(-1.0, 1.0, size=(3, 3))
        game = MatrixGame(a, domain)
        est, err = game_value_grid(game, resolution=resolution)

        sol = solve_improper_game(game, lambda v, r: exact_best_response(v), horizon)
        cert = certify_solution(sol, reference_value=est, reference_error=err)
        exact_ok += cert.passed
        worst = min(worst, cert.guaranteed - cert.external_threshold)

        rng = RngStream(g_idx, 1)
        sol = solve_improper_game(
            game, lambda v, r: noisy_best_response(v, GAME_NOISE, r), horizon, rng=rng)
        cert = certify_solution(sol, epsilon0=GAME_NOISE,
                                reference_value=est, reference_error=err)
        noisy_ok += cert.passed
        worst = min(worst, cert.guaranteed - cert.external_threshold)
    wall = time.perf_counter() - t0
    in_budget = wall <= GAME_BUDGET
    ok = exact_ok == count and noisy_ok == count and in_budget
    return ok, (f"{exact_ok}/{count} exact and {noisy_ok}/{count} noisy certificates, "
                f"worst margin {worst:.3f}, {wall:.0f}s"
                + ("" if in_budget else " OVER BUDGET"))


def batch_realizable_floor(quick: bool = False) -> tuple[bool, str]:
    """Sample correlation above 1 - 3/(gamma sqrt(T)) on clean data."""
    t_rounds = 100 if quick else 400
    sample = draw_stat_sample(AdversarySpec("threshold-realizable", 200), 0)
    report = run_stat_experiment(
        sample, lambda r: StumpErmLearner(THRESHOLD_GRID, 1.0, 30, r),
        gamma=1.0, m0=30, t_rounds=t_rounds, mode="realizable",
        seeds=range(10), floor=realizable_floor(1.0, t_rounds),
        name="stat-realizable")
    return report.passed, (f"mean correlation {report.mean:.4f} +- {report.ci:.4f} "
                           f"vs floor {report.bound:.4f}")


def batch_agnostic_floor(quick: bool = False) -> tuple[bool, str]:
    """Sample correlation above best - eps0/gamma - 6/(gamma sqrt(T))."""
    t_rounds = 100 if quick else 400
    gamma, m0 = 0.4, 50
    sample = draw_stat_sample(AdversarySpec("noisy-threshold", 400, 0.15), 0)
    eps0 = declared_epsilon0(len(THRESHOLD_GRID), m0)
    _, best_gain = best_in_hindsight(signed_threshold_pool(len(THRESHOLD_GRID)), sample)
    floor = agnostic_floor(best_gain / len(sample), eps0, gamma, t_rounds)
    report = run_stat_experiment(
        sample, lambda r: StumpErmLearner(THRESHOLD_GRID, gamma, m0, r),
        gamma=gamma, m0=m0, t_rounds=t_rounds, mode="agnostic",
        seeds=range(10), floor=floor, name="stat-agnostic")
    return report.passed, (f"mean correlation {report.mean:.4f} +- {report.ci:.4f} "
                           f"vs floor {report.bound:.4f} (eps0 {eps0:.4f})")


def prescient_mistake_rate(quick: bool = False) -> tuple[bool, str]:
    """Label-peeking weak learners keep the booster at or below rate 1/2."""
    horizon = n_learners = 45
    gamma, target = 0.3, 0.5
    pool = signed_threshold_pool(8)
    rates = []
    for s in range(10):
        seq = generate_sequence(AdversarySpec("uniform-random", horizon),
                                RngStream(s, data_stream_id(n_learners)))
        cfg = OnlineBoosterConfig(n_learners, gamma, horizon, "realizable",
                                  PrescientSpec(gamma), master_seed=s)
        trace = run_online(cfg, seq, pool)
        rates.append((1.0 - trace.cum_gain[-1] / horizon) / 2.0)
    rates = np.asarray(rates)
    ci = 3.0 * rates.std(ddof=1) / np.sqrt(len(rates))
    ok = rates.mean() <= target + ci
    return ok, f"mistake rate {rates.mean():.4f} +- {ci:.4f} vs {target}"


def descent_regret_sweep(quick: bool = False) -> tuple[bool, str]:
    """100 adversarial descent runs inside 1.5 G D sqrt(N), no clipping."""
    outcomes = run_checks(names=("descent-regret-sweep",))
    sweep_ok = all(o.passed for o in outcomes)

    pool = signed_threshold_pool(8)
    clip_total = 0
    for force_generic in (False, True):
        cfg = OnlineBoosterConfig(40, 0.5, 120, "agnostic", HedgeSpec(pool, 0.5),
                                  master_seed=3, force_generic=force_generic)
        seq = generate_sequence(AdversarySpec("noisy-threshold", 120, ONLINE_NOISE),
                                RngStream(3, data_stream_id(40)))
        clip_total += run_online(cfg, seq, pool).clip_count
    ok = sweep_ok and clip_total == 0
    return ok, (f"sweep {'passed' if sweep_ok else 'FAILED'}; "
                f"{clip_total} clip events across both booster paths")


def trace_byte_determinism(quick: bool = False) -> tuple[bool, str]:
    """Two independent sweeps write byte-identical trace files."""
    pool = signed_threshold_pool(8)
    cfg = OnlineBoosterConfig(30, 0.5, 60, "agnostic", HedgeSpec(pool, 0.5))
    adv = AdversarySpec("noisy-threshold", 60, ONLINE_NOISE)
    sample = draw_stat_sample(AdversarySpec("noisy-threshold", 80, 0.1), 0)
    seeds = range(10)

    with tempfile.TemporaryDirectory() as tmp:
        paths = [Path(tmp) / f"trace-{i}.csv" for i in range(4)]
        for i in (0, 1):
            report = run_online_experiment(cfg, adv, pool, seeds)
            write_online_csv(paths[i], seeds, report.traces)
        for i in (2, 3):
            report = run_stat_experiment(
                sample, lambda r: StumpErmLearner(THRESHOLD_GRID, 0.5, 20, r),
                gamma=0.5, m0=20, t_rounds=40, mode="agnostic",
                seeds=seeds, floor=-1.0)
            write_stat_csv(paths[i], seeds, report.traces)
        blobs = [p.read_bytes() for p in paths]
    online_same = blobs[0] == blobs[1]
    stat_same = blobs[2] == blobs[3]
    ok = online_same and stat_same
    return ok, (f"online bytes {'match' if online_same else 'DIFFER'} "
                f"({len(blobs[0])}B), stat bytes "
                f"{'match' if stat_same else 'DIFFER'} ({len(blobs[2])}B)")


CRITERIA = (
    ("online-agnostic-bounds", online_agnostic_bounds),
    ("vote-identities", vote_identities),
    ("game-value-certificates", game_value_certificates),
    ("batch-realizable-floor", batch_realizable_floor),
    ("batch-agnostic-floor", batch_agnostic_floor),
    ("prescient-mistake-rate", prescient_mistake_rate),
    ("descent-regret-sweep", descent_regret_sweep),
    ("trace-byte-determinism", trace_byte_determinism),
)


def run_criterion(name: str, quick: bool = False) -> CriterionResult:
    fns = dict(CRITERIA)
    if name not in fns:
        raise KeyError(f"unknown criterion {name!r}")
    t0 = time.perf_counter()
    try:
        passed, detail = fns[name](quick=quick)
    except Exception as exc:  # a crash is a failure, not an abort
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CriterionResult(name, bool(passed), detail, time.perf_counter() - t0)


def run_all(quick: bool = False, emit=print) -> list[CriterionResult]:
    results = []
    for name, _ in CRITERIA:
        res = run_criterion(name, quick=quick)
        results.append(res)
        if emit is not None:
            mark = "pass" if res.passed else "FAIL"
            emit(f"[{mark}] {res.name} ({res.seconds:.1f}s) {res.detail}")
    return results
