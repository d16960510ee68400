"""Command-line front end: generate games, run dynamics, certify states.

Subcommands: ``gen`` writes a game file, ``run`` produces a trajectory CSV
plus a reproducibility manifest, ``verify`` certifies a saved state against a
saved game, and ``maxent`` runs the Bell-basis entangled-equilibrium demo.
Exit codes: 0 on success (and verdict true for ``verify``), 1 for domain
errors or a false verdict, 2 for I/O problems.  All outputs are deterministic
functions of the flags and seeds.  ``QG_THREADS`` caps batch parallelism.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .equilibria import is_qcce, is_qne, maxent_qcce_condition, ppt_witness, zs_certificate
from .games import (
    PolymatrixGame,
    QuantumGame,
    bell_projector,
    graph_edges,
    maxent_game,
    polymatrix_to_qg,
    random_game,
    random_polymatrix,
    zs_from_game,
)
from .learning import FrobeniusFTRL, MMWU, Schedule, doubling_schedule, fixed_schedule, horizon_for_epsilon, run_game
from .serialize import (
    certificate_to_obj,
    dumps_canonical,
    load_game,
    load_state,
    manifest_obj,
    report_to_obj,
    save_game,
    sha256_file,
    write_json,
    write_trajectory_csv,
)
from .tensor import partial_trace


def _parse_dims(text: str) -> tuple[int, ...]:
    dims = tuple(int(tok) for tok in text.split(","))
    if any(d < 2 for d in dims):
        raise ValueError("register dimensions must be >= 2")
    return dims


def _parse_graph(text: str, k: int) -> list[tuple[int, int]]:
    m = re.fullmatch(r"([a-z]+)(\d*)", text)
    if not m:
        raise ValueError(f"cannot parse graph spec {text!r}")
    name, num = m.group(1), m.group(2)
    if num and int(num) != k:
        raise ValueError(f"graph size {num} does not match {k} players")
    return graph_edges(name, k)


def _parse_payoff(text: str) -> np.ndarray:
    rows = [[float(x) for x in row.split(",")] for row in text.split(";")]
    return np.asarray(rows, dtype=float)


def _generate(kind: str, dims: tuple[int, ...], seed: int, graph: str | None, pairwise_zero_sum: bool):
    if kind == "general":
        return random_game(dims, seed, "general")
    if kind == "zero-sum":
        return random_game(dims, seed, "zero_sum")
    if kind == "polymatrix":
        edges = _parse_graph(graph or "cycle", len(dims))
        return random_polymatrix(dims, edges, seed, pairwise_zero_sum)
    raise ValueError(f"unknown game kind {kind!r}")


def cmd_gen(args) -> int:
    game = _generate(args.kind, _parse_dims(args.dims), args.seed, args.graph, args.pairwise_zero_sum)
    save_game(args.out, game, seed=args.seed)
    return 0


def _run_setup(game, args):
    """Resolve (playable game, gap mode, bound scale, schedule, T) from flags."""
    if isinstance(game, PolymatrixGame):
        playable = polymatrix_to_qg(game)
        gap_mode, bound_scale = "qne", float(playable.n_players)
        setting = "polymatrix"
    elif game.zero_sum and game.n_players == 2:
        playable, gap_mode, bound_scale, setting = game, "qne", 2.0, "zero_sum"
    else:
        playable, gap_mode, bound_scale, setting = game, "qcce", 1.0, "general"

    if (args.epsilon is None) == (args.T is None):
        raise ValueError("specify exactly one of --epsilon or --T")
    if args.epsilon is not None:
        if args.eta is not None or args.schedule == "doubling":
            raise ValueError("--epsilon fixes the stepsize; do not combine with --eta or doubling")
        eta, horizon = horizon_for_epsilon(
            setting, max(playable.dims), args.epsilon, k=playable.n_players
        )
        schedule = fixed_schedule(eta)
    else:
        horizon = args.T
        if args.schedule == "doubling":
            schedule = doubling_schedule()
        else:
            if args.eta is None:
                raise ValueError("--T needs --eta (or --schedule doubling)")
            schedule = fixed_schedule(args.eta)
    return playable, gap_mode, bound_scale, schedule, horizon


def _make_learners(learner_arg: str | None, playable: QuantumGame, schedule: Schedule):
    names = learner_arg.split(",") if learner_arg else ["mmwu"] * playable.n_players
    if len(names) != playable.n_players:
        raise ValueError(f"need {playable.n_players} learner kinds, got {len(names)}")
    learners = []
    for i, name in enumerate(names):
        if name == "mmwu":
            learners.append(MMWU(playable.dims[i], schedule))
        elif name == "ftrl":
            if schedule.kind != "fixed":
                raise ValueError("ftrl supports only fixed stepsizes")
            learners.append(FrobeniusFTRL(playable.dims[i], schedule.eta))
        else:
            raise ValueError(f"unknown learner kind {name!r}")
    return names, learners


def _run_once(args, outdir: Path, seed: int) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    if args.game is not None:
        game_path = Path(args.game)
        _, game = load_game(game_path)
    else:
        if args.kind is None:
            raise ValueError("either --game or an inline --kind spec is required")
        game = _generate(args.kind, _parse_dims(args.dims), seed, args.graph, args.pairwise_zero_sum)
        game_path = outdir / "game.json"
        save_game(game_path, game, seed=seed)

    playable, gap_mode, bound_scale, schedule, horizon = _run_setup(game, args)
    names, learners = _make_learners(args.learners, playable, schedule)
    stride = args.stride if args.stride is not None else max(1, horizon // 1000)
    traj = run_game(playable, learners, horizon, stride=stride, gap_mode=gap_mode, bound_scale=bound_scale)
    write_trajectory_csv(outdir / "trajectory.csv", traj)
    schedule_obj = {"kind": schedule.kind, "eta": schedule.eta, "base_epoch": schedule.base_epoch}
    manifest = manifest_obj(
        game_hash=sha256_file(game_path),
        seeds={"game": seed, "run": seed},
        learner_kinds=names,
        schedule=schedule_obj,
        T=horizon,
        stride=stride,
        gap_mode=gap_mode,
        bound_scale=bound_scale,
        tool_version=__version__,
    )
    write_json(outdir / "manifest.json", manifest)


def cmd_run(args) -> int:
    outdir = Path(args.out)
    if args.runs == 1:
        _run_once(args, outdir, args.seed)
        return 0
    if args.game is not None:
        raise ValueError("--runs > 1 requires an inline game spec so each run draws a fresh seed")
    workers = int(os.environ.get("QG_THREADS", os.cpu_count() or 1))
    run_ids = list(range(args.runs))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        futures = [
            pool.submit(_run_once, args, outdir / f"run_{rid:03d}", args.seed + rid) for rid in run_ids
        ]
        for fut in futures:
            fut.result()
    return 0


def cmd_verify(args) -> int:
    _, game = load_game(args.game)
    _, rho = load_state(args.state)
    playable = polymatrix_to_qg(game) if isinstance(game, PolymatrixGame) else game
    if args.kind == "qcce":
        rep = is_qcce(playable, rho, tol=args.tol)
        print(dumps_canonical(report_to_obj(rep)), end="")
        return 0 if rep.verdict else 1
    if args.kind == "qne":
        rep = is_qne(playable, rho, tol=args.tol)
        print(dumps_canonical(report_to_obj(rep)), end="")
        return 0 if rep.verdict else 1
    if args.kind == "zs-value":
        if isinstance(playable, QuantumGame) and playable.zero_sum and playable.n_players == 2:
            zs = zs_from_game(playable)
        else:
            raise ValueError("zs-value verification needs a two-player zero-sum game")
        rho_a = partial_trace(rho, playable.dims, keep=(0,))
        sigma_b = partial_trace(rho, playable.dims, keep=(1,))
        cert = zs_certificate(zs, rho_a, sigma_b)
        print(dumps_canonical(certificate_to_obj(cert, args.tol)), end="")
        return 0 if cert.is_eps_qne(args.tol) else 1
    raise ValueError(f"unknown verification kind {args.kind!r}")


def cmd_maxent(args) -> int:
    a = _parse_payoff(args.a)
    b = _parse_payoff(args.b) if args.b is not None else a
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError("Bell-basis demo needs 2x2 payoff matrices")
    game = maxent_game(a, b)
    p, q = np.unravel_index(int(np.argmax(a)), (2, 2))
    lam = np.zeros((2, 2))
    lam[p, q] = 1.0
    bell = bell_projector(int(p), int(q))
    rep = is_qcce(game, bell, tol=1e-8)
    scalar = maxent_qcce_condition(a, b, lam, tol=1e-8)
    obj = {
        "payoff_a": [[float(x) for x in row] for row in a],
        "payoff_b": [[float(x) for x in row] for row in b],
        "bell_index": [int(p), int(q)],
        "scalar_condition": scalar,
        "spectrahedral": report_to_obj(rep),
        "agreement": scalar == rep.verdict,
        "witness": ppt_witness(bell, (2, 2)),
    }
    print(dumps_canonical(obj), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgames", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random game file")
    gen.add_argument("--kind", required=True, choices=["general", "zero-sum", "polymatrix"])
    gen.add_argument("--dims", required=True, help="comma-separated register dimensions, e.g. 2,2")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--graph", default=None, help="polymatrix graph: cycle, path, complete (optionally sized, e.g. cycle3)")
    gen.add_argument("--pairwise-zero-sum", action=argparse.BooleanOptionalAction, default=True)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_gen)

    run = sub.add_parser("run", help="run learning dynamics and emit a trajectory CSV")
    run.add_argument("--game", default=None, help="path to a game file (or use the inline gen flags)")
    run.add_argument("--kind", default=None, choices=["general", "zero-sum", "polymatrix"])
    run.add_argument("--dims", default="2,2")
    run.add_argument("--graph", default=None)
    run.add_argument("--pairwise-zero-sum", action=argparse.BooleanOptionalAction, default=True)
    run.add_argument("--learners", default=None, help="comma-separated per-player kinds: mmwu, ftrl")
    run.add_argument("--eta", type=float, default=None)
    run.add_argument("--epsilon", type=float, default=None, help="target accuracy; derives eta and T")
    run.add_argument("--T", type=int, default=None)
    run.add_argument("--schedule", default="fixed", choices=["fixed", "doubling"])
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--stride", type=int, default=None)
    run.add_argument("--runs", type=int, default=1)
    run.add_argument("--out", required=True)
    run.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify", help="certify a saved state against a saved game")
    ver.add_argument("--game", required=True)
    ver.add_argument("--state", required=True)
    ver.add_argument("--kind", required=True, choices=["qne", "qcce", "zs-value"])
    ver.add_argument("--tol", type=float, default=1e-6)
    ver.set_defaults(func=cmd_verify)

    mx = sub.add_parser("maxent", help="Bell-basis entangled equilibrium demo")
    mx.add_argument("--a", required=True, help="2x2 payoff matrix, rows ; separated: '1,0;0,0'")
    mx.add_argument("--b", default=None)
    mx.set_defaults(func=cmd_maxent)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    raise SystemExit(main())
