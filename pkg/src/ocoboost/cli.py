"""Command line front end.

Exit codes: 0 when the requested run met its bound or certificate,
1 when it did not, 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .acceptance import run_all
from .boost_online import OnlineBoosterConfig
from .checks import run_checks
from .core import (
    ConfigurationError,
    ContractViolationError,
    InvalidInputError,
    RngStream,
    UnsupportedSizeError,
    best_in_hindsight,
)
from .boost_stat import agnostic_floor, realizable_floor
from .games import (
    MatrixGame,
    certify_solution,
    exact_best_response,
    game_value_grid,
    load_matrix,
    noisy_best_response,
    solve_improper_game,
    two_row_game,
)
from .harness import (
    draw_stat_sample,
    parse_adversary,
    run_online_experiment,
    run_stat_experiment,
    signed_threshold_pool,
    write_online_csv,
    write_stat_csv,
)
from .oco import BoxDomain
from .weaklearn import HedgeSpec, PrescientSpec, StumpErmLearner, declared_epsilon0


def _add_sweep_flags(sp, seeds_default: int = 10) -> None:
    sp.add_argument("--seeds", type=int, default=seeds_default,
                    help="number of consecutive seeds to sweep")
    sp.add_argument("--seed", type=int, default=0, help="first seed")
    sp.add_argument("--out", type=Path, default=None, help="write the trace CSV here")


def _add_online_flags(sp, adversary_default: str) -> None:
    sp.add_argument("--t", type=int, default=500, help="rounds")
    sp.add_argument("--n-weak", type=int, default=500, dest="n_weak",
                    help="weak learners in the bank")
    sp.add_argument("--gamma", type=float, default=0.5, help="edge parameter")
    sp.add_argument("--adversary", default=adversary_default,
                    help="data source, name[:param]")
    sp.add_argument("--pool", type=int, default=32,
                    help="threshold count of the benchmark pool (experts = 2x)")
    _add_sweep_flags(sp)


def _add_stat_flags(sp, m: int, m0: int, gamma: float, adversary: str) -> None:
    sp.add_argument("--m", type=int, default=m, help="sample size")
    sp.add_argument("--m0", type=int, default=m0, help="examples fed per round")
    sp.add_argument("--t", type=int, default=400, help="boosting rounds")
    sp.add_argument("--gamma", type=float, default=gamma, help="edge parameter")
    sp.add_argument("--adversary", default=adversary, help="data source, name[:param]")
    sp.add_argument("--grid", type=int, default=32, help="stump thresholds for ERM")
    _add_sweep_flags(sp)


def _seed_range(args) -> range:
    return range(args.seed, args.seed + args.seeds)


def _cmd_online(args, mode: str) -> int:
    pool = signed_threshold_pool(args.pool)
    if getattr(args, "weak", "hedge") == "prescient":
        spec = PrescientSpec(args.gamma)
    else:
        spec = HedgeSpec(pool, args.gamma)
    cfg = OnlineBoosterConfig(args.n_weak, args.gamma, args.t, mode, spec)
    adv = parse_adversary(args.adversary, args.t)
    seeds = _seed_range(args)
    report = run_online_experiment(cfg, adv, pool, seeds, name=f"online-{mode}")
    print(report.describe())
    if args.out is not None:
        write_online_csv(args.out, seeds, report.traces)
        print(f"wrote {args.out}")
    return 0 if report.passed else 1


def _cmd_stat(args, mode: str) -> int:
    adv = parse_adversary(args.adversary, args.m)
    sample = draw_stat_sample(adv, args.seed)
    grid = np.linspace(0.0, 1.0, args.grid)
    if mode == "realizable":
        floor = realizable_floor(args.gamma, args.t)
    else:
        eps0 = declared_epsilon0(args.grid, args.m0)
        _, best_gain = best_in_hindsight(signed_threshold_pool(args.grid), sample)
        floor = agnostic_floor(best_gain / len(sample), eps0, args.gamma, args.t)
    seeds = _seed_range(args)
    report = run_stat_experiment(
        sample, lambda r: StumpErmLearner(grid, args.gamma, args.m0, r),
        gamma=args.gamma, m0=args.m0, t_rounds=args.t, mode=mode,
        seeds=seeds, floor=floor, name=f"stat-{mode}")
    print(report.describe())
    if args.out is not None:
        write_stat_csv(args.out, seeds, report.traces)
        print(f"wrote {args.out}")
    return 0 if report.passed else 1


def _cmd_game(args) -> int:
    if args.matrix is not None:
        m = load_matrix(Path(args.matrix).read_text())
        if m.shape[0] == 2:
            game = two_row_game(m)
        else:
            dim = m.shape[0]
            game = MatrixGame(m, BoxDomain(np.full(dim, -1.0), np.full(dim, 1.0)))
    else:
        a = np.random.default_rng(args.seed).uniform(-1.0, 1.0, size=(3, 3))
        game = MatrixGame(a, BoxDomain(np.full(3, -1.0), np.full(3, 1.0)))
    est, err = game_value_grid(game, resolution=args.resolution)

    if args.epsilon0 > 0.0:
        rng = RngStream(args.seed, 1)
        oracle = lambda v, r: noisy_best_response(v, args.epsilon0, r)
    else:
        rng, oracle = None, lambda v, r: exact_best_response(v)
    sol = solve_improper_game(game, oracle, args.t, rng=rng)
    cert = certify_solution(sol, epsilon0=args.epsilon0,
                            reference_value=est, reference_error=err)

    with np.printoptions(precision=4, suppress=True):
        print(f"grid value estimate {est:.4f} (error bound {err:.4f})")
        print(f"averaged row play   {sol.p_bar}")
        print(f"averaged column play {sol.q_bar}")
        print(f"guaranteed payoff   {cert.guaranteed:.4f}")
        print(f"internal threshold  {cert.internal_threshold:.4f} "
              f"[{'ok' if cert.internal_ok else 'FAIL'}]")
        print(f"external threshold  {cert.external_threshold:.4f} "
              f"[{'ok' if cert.external_ok else 'FAIL'}]")
    print(f"certificate [{'pass' if cert.passed else 'FAIL'}]")
    return 0 if cert.passed else 1


def _cmd_verify(args) -> int:
    outcomes = run_checks(include_slow=not args.quick, emit=print)
    results = run_all(quick=args.quick)
    checks_ok = sum(o.passed for o in outcomes)
    crit_ok = sum(r.passed for r in results)
    print(f"checks {checks_ok}/{len(outcomes)}, criteria {crit_ok}/{len(results)}")
    return 0 if checks_ok == len(outcomes) and crit_ok == len(results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocoboost",
        description="Online and batch boosting driven by projected gradient descent.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("online-agnostic", help="online sweep against a noisy source")
    _add_online_flags(sp, "noisy-threshold:0.2")
    sp.set_defaults(fn=lambda a: _cmd_online(a, "agnostic"))

    sp = sub.add_parser("online-realizable", help="online sweep on clean labels")
    _add_online_flags(sp, "threshold-realizable")
    sp.add_argument("--weak", choices=("hedge", "prescient"), default="hedge",
                    help="weak learner family")
    sp.set_defaults(fn=lambda a: _cmd_online(a, "realizable"))

    sp = sub.add_parser("stat-agnostic", help="batch sweep against a noisy sample")
    _add_stat_flags(sp, m=400, m0=50, gamma=0.4, adversary="noisy-threshold:0.15")
    sp.set_defaults(fn=lambda a: _cmd_stat(a, "agnostic"))

    sp = sub.add_parser("stat-realizable", help="batch sweep on a clean sample")
    _add_stat_flags(sp, m=200, m0=30, gamma=1.0, adversary="threshold-realizable")
    sp.set_defaults(fn=lambda a: _cmd_stat(a, "realizable"))

    sp = sub.add_parser("game", help="solve one matrix game and certify the value")
    sp.add_argument("--matrix", type=Path, default=None,
                    help="whitespace matrix file; 2 rows play the simplex, "
                         "more rows play the box [-1,1]^rows; "
                         "omitted: random 3x3 from --seed")
    sp.add_argument("--t", type=int, default=10_000, help="solver rounds")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--epsilon0", type=float, default=0.0,
                    help="oracle shortfall; positive switches to the noisy oracle")
    sp.add_argument("--resolution", type=int, default=100,
                    help="lattice resolution for the reference value")
    sp.set_defaults(fn=_cmd_game)

    sp = sub.add_parser("verify", help="run the check registry and all criteria")
    sp.add_argument("--quick", action="store_true",
                    help="fast checks only and reduced-scale criteria")
    sp.set_defaults(fn=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (InvalidInputError, ConfigurationError, UnsupportedSizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ContractViolationError as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
