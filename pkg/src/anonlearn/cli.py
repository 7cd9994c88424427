"""Experiment runner CLI: single runs, sweeps, and quick analyses.

Exit codes: 0 ok, 2 config error, 3 IO error.  Output files are written to a
temp name and renamed, so a crash never leaves a half-written CSV behind.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ConfigError, ExperimentSpec, load_experiment
from .core import ActionDistribution, estimate_lipschitz
from .dynamics import best_reply_set, br_sequence, is_eta_nash
from .engine import RunConfig, build_game, run_many

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def _atomic_write(path: Path, write_to):
    """write_to(tmp_path) then rename onto path."""
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.", suffix=".tmp")
    os.close(fd)
    try:
        write_to(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _run_name(n: int, kind: str, seed: int) -> str:
    return f"run_n{n}_{kind}_seed{seed}"


def _write_aggregate(path: Path, cells, traces):
    """Mean distance / best-reply fraction per stage, averaged over seeds."""
    groups: dict = {}
    for (n, kind, _seed, _cfg), trace in zip(cells, traces):
        groups.setdefault((n, kind), []).append(trace)

    def writer(tmp):
        with open(tmp, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "learner", "stage", "end_round", "mean_distance", "mean_br_fraction"])
            for (n, kind), ts in sorted(groups.items()):
                tau = ts[0].config.resolved_stage_len
                dist = np.mean([t.stage_distance for t in ts], axis=0)
                brf = np.mean([t.stage_br_fraction for t in ts], axis=0)
                for s in range(dist.size):
                    w.writerow(
                        [n, kind, s, (s + 1) * tau, repr(float(dist[s])), repr(float(brf[s]))]
                    )

    _atomic_write(path, writer)


def _execute_spec(spec: ExperimentSpec, out: str, threads: int) -> int:
    cells = list(spec.runs())
    traces = run_many([cfg for _, _, _, cfg in cells], threads=threads)
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    for (n, kind, seed, _cfg), trace in zip(cells, traces):
        name = _run_name(n, kind, seed)
        _atomic_write(outdir / f"{name}.csv", trace.to_csv)
        summary = trace.summary_text()
        _atomic_write(
            outdir / f"{name}.summary.txt",
            lambda tmp, text=summary: Path(tmp).write_text(text, encoding="utf-8"),
        )
    _write_aggregate(outdir / "aggregate.csv", cells, traces)
    print(f"wrote {len(traces)} run(s) and aggregate.csv to {outdir}")
    return EXIT_OK


def cmd_run(args) -> int:
    spec = load_experiment(args.config)
    if args.seed is not None:
        spec = ExperimentSpec(
            replace(spec.base, seed=args.seed),
            spec.populations,
            spec.learners,
            (args.seed,),
        )
    return _execute_spec(spec, args.out, args.threads)


def cmd_sweep(args) -> int:
    spec = load_experiment(args.config)
    if len(spec) < 2:
        raise ConfigError(
            "sweep: config defines no sweep grid (set sweep.populations, "
            "sweep.seeds, or sweep.learners)"
        )
    return _execute_spec(spec, args.out, args.threads)


def _parse_rho(text: str, k: int) -> ActionDistribution:
    try:
        weights = [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"--rho: expected numbers, got {text!r}") from None
    if len(weights) != k:
        raise ConfigError(f"--rho: expected {k} weights, got {len(weights)}")
    try:
        return ActionDistribution(weights)
    except ValueError as exc:
        raise ConfigError(f"--rho: {exc}") from None


def cmd_analyze(args) -> int:
    config = RunConfig(
        game=args.game,
        matrix_path=args.matrix,
        penalty_n=args.penalty_n,
        mode=args.payoff_mode,
    )
    game = build_game(config)
    if args.mode == "lipschitz":
        declared = game.lipschitz
        est = estimate_lipschitz(game, samples=args.samples, rng_seed=args.seed or 0)
        print(f"declared K: {'unknown' if declared is None else repr(float(declared))}")
        print(f"sampled lower bound ({args.samples} pairs): {est!r}")
        return EXIT_OK
    if args.mode == "nash":
        if args.rho is None:
            raise ConfigError("--rho is required for --mode nash")
        rho = _parse_rho(args.rho, game.k)
        ok = is_eta_nash(rho, args.eta, game)
        abr = sorted(best_reply_set(rho, args.eta, game))
        print(f"eta-nash (eta={args.eta}): {ok}")
        print(f"ABR_eta(rho) = {abr}")
        return EXIT_OK
    # brs
    rho0 = _parse_rho(args.rho, game.k) if args.rho else ActionDistribution.uniform(game.k)
    seq = br_sequence(rho0, args.eta, game, max_steps=args.max_steps, rule=args.rule)
    for t, rho in enumerate(seq.steps):
        print(f"step {t}: {np.array2string(rho.weights, precision=4, suppress_small=True)}")
    if seq.converged:
        final = seq.steps[seq.fixed_point_index]
        support = [int(a) for a in final.support()]
        print(f"converged: fixed point at step {seq.fixed_point_index}, support {support}")
        print(f"fixed point is an eta-nash (eta={args.eta}): {is_eta_nash(final, args.eta, game)}")
    else:
        print(f"did not converge within {args.max_steps} steps")
    return EXIT_OK


def cmd_gnuplot(args) -> int:
    """Pivot an aggregate.csv into gnuplot columns: end_round, then one
    metric column per (n, learner)."""
    series: dict = {}
    rounds: dict = {}
    with open(args.aggregate, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or args.metric not in reader.fieldnames:
            raise ConfigError(f"--metric: {args.metric!r} not a column of {args.aggregate}")
        for row in reader:
            key = (int(row["n"]), row["learner"])
            series.setdefault(key, []).append(float(row[args.metric]))
            rounds.setdefault(key, []).append(int(row["end_round"]))
    if not series:
        raise ConfigError(f"{args.aggregate}: no data rows")
    lengths = {len(v) for v in series.values()}
    if len(lengths) != 1:
        raise ConfigError(f"{args.aggregate}: series have unequal stage counts {lengths}")
    keys = sorted(series)
    axis = rounds[keys[0]]

    def writer(tmp):
        with open(tmp, "w", encoding="utf-8") as fh:
            names = " ".join(f"{args.metric}_n{n}_{kind}" for n, kind in keys)
            fh.write(f"# end_round {names}\n")
            for i, r in enumerate(axis):
                cols = " ".join(repr(series[key][i]) for key in keys)
                fh.write(f"{r} {cols}\n")

    _atomic_write(Path(args.out), writer)
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anonlearn",
        description="Population learning experiments: run, sweep, analyze.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute the runs a config describes")
    p_run.add_argument("--config", required=True, help="experiment config file")
    p_run.add_argument("--out", default="out", help="output directory (default: out)")
    p_run.add_argument("--seed", type=int, default=None, help="force a single master seed")
    p_run.add_argument("--threads", type=int, default=1, help="parallel runs (default: 1)")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="like run, but requires a sweep grid")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", default="out")
    p_sweep.add_argument("--threads", type=int, default=1)
    p_sweep.set_defaults(func=cmd_sweep)

    p_an = sub.add_parser("analyze", help="best-reply sequences, eta-Nash, Lipschitz")
    p_an.add_argument("--game", default="contribution",
                      choices=("contribution", "prisoners_dilemma", "climbing", "matrix"))
    p_an.add_argument("--matrix", default=None, help="matrix file for --game matrix")
    p_an.add_argument("--penalty-n", type=int, default=20, dest="penalty_n")
    p_an.add_argument("--payoff-mode", default="meanfield", choices=("meanfield", "matching"))
    p_an.add_argument("--mode", default="brs", choices=("brs", "nash", "lipschitz"))
    p_an.add_argument("--eta", type=float, default=0.0)
    p_an.add_argument("--rho", default=None, help="comma/space-separated weights")
    p_an.add_argument("--rule", default="pointmass", choices=("pointmass", "uniform"))
    p_an.add_argument("--max-steps", type=int, default=100, dest="max_steps")
    p_an.add_argument("--samples", type=int, default=200, help="pairs for lipschitz mode")
    p_an.add_argument("--seed", type=int, default=None)
    p_an.set_defaults(func=cmd_analyze)

    p_gp = sub.add_parser("gnuplot", help="pivot an aggregate.csv for gnuplot")
    p_gp.add_argument("--aggregate", required=True, help="aggregate.csv from run/sweep")
    p_gp.add_argument("--out", required=True, help="output .dat path")
    p_gp.add_argument("--metric", default="mean_distance")
    p_gp.set_defaults(func=cmd_gnuplot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
