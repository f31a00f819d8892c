"""Command-line front end.

Every command prints (or writes to ``--out``) a JSON envelope
``{"config": ..., "results": ..., "version": ...}``; ``--format csv`` emits
the command's main table instead.  Randomness comes from ``--seed`` through
two named substreams, one for the optimizer and one for measurement shots,
so changing ``--shots`` never perturbs the angle search.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from . import statevector as sv
from .errors import (
    BudgetExceededError,
    GraphParseError,
    InfeasibleError,
    QaoaError,
    ResourceLimitError,
    SpecialCaseError,
)
from .graph import Graph, count_crossed_squares, count_isolated_triangles, is_k4, parse_graph
from .maxcut_analysis import certify_instance, max_cut_brute_force, ring_mp, worst_case_ratio
from .mis_variant import (
    DEFAULT_MAX_BASIS,
    VariantConfig,
    VariantModel,
    maximize_variant,
    sample_variant,
)
from .optimizer import OptimizerConfig, grid_axes, maximize_fp
from .qaoa import concentration_bound, make_objective, repetition_estimate

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_RESOURCE = 4
EXIT_BUDGET = 5
EXIT_INFEASIBLE = 6

OPTIMIZER_STREAM = 0
SHOT_STREAM = 1

DEFAULT_P_CAP = 3
RING_P_CAP = 6
BRUTE_FORCE_LIMIT = 20


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream])


def _optimizer_config(args) -> OptimizerConfig:
    config = OptimizerConfig(seed=args.seed)
    if args.grid is not None:
        config.resolution = dict(config.resolution)
        config.resolution[args.p] = args.grid
    return config


def _read_graph(path: str) -> Graph:
    return parse_graph(Path(path).read_text())


def _check_p(args, cap: int = DEFAULT_P_CAP) -> None:
    if args.p < 1:
        raise InfeasibleError("--p must be at least 1")
    if args.p > cap:
        raise BudgetExceededError(f"p={args.p} exceeds the cap of {cap}")


def run_maxcut(args) -> tuple[dict, list[dict]]:
    g = _read_graph(args.graph)
    _check_p(args)
    if g.n_vertices > args.limit_qubits:
        raise ResourceLimitError(
            f"{g.n_vertices} qubits exceeds --limit-qubits {args.limit_qubits}; sampling needs the full state"
        )
    config = _optimizer_config(args)
    opt = maximize_fp(g, args.p, config, max_qubits=args.limit_qubits)
    c = sv.cost_diagonal(g, args.limit_qubits)
    state = sv.prepare_qaoa_state(c, opt.best_schedule, args.limit_qubits)
    f_value = sv.expectation(state, c)
    m = g.m
    reps = repetition_estimate(f_value, m) if m >= 2 else 1
    shots = args.shots or reps
    idx = sv.sample_indices(state, _rng(args.seed, SHOT_STREAM), shots)
    cuts = c[idx]
    best = int(idx[int(np.argmax(cuts))])
    results = {
        "n": g.n_vertices,
        "m": m,
        "p": args.p,
        "optimization": opt.to_dict(),
        "fp": f_value,
        "variance": sv.variance(state, c),
        "concentration_bound": concentration_bound(max(g.max_degree, 2), args.p, m).variance_bound,
        "repetition_estimate": reps,
        "shots": shots,
        "sample_mean": float(cuts.mean()),
        "best_sampled_cut": int(cuts.max()),
        "best_sampled_string": sv.index_to_bitstring(best, g.n_vertices),
    }
    if g.n_vertices <= BRUTE_FORCE_LIMIT:
        optimum = max_cut_brute_force(g)
        results["max_cut"] = optimum
        results["ratio"] = f_value / optimum if optimum else None
    if args.p == 1 and g.is_regular(3) and g.n_vertices and not is_k4(g):
        S, T = count_crossed_squares(g), count_isolated_triangles(g)
        upper = 1.5 * g.n_vertices - S - T
        results["certificate"] = {
            "S": S, "T": T, "cut_upper_bound": upper, "ratio_lower_bound": opt.best_value / upper,
        }
    table = [{"string": sv.index_to_bitstring(int(i), g.n_vertices), "cut": int(v)} for i, v in zip(idx, cuts)]
    return results, table


def run_ring(args) -> tuple[dict, list[dict]]:
    cap = RING_P_CAP if args.extended_ring else DEFAULT_P_CAP
    _check_p(args, cap)
    config = _optimizer_config(args)
    rows = []
    prev = None
    for p in range(1, args.p + 1):
        mp, prev = ring_mp(args.n, p, config, prev)
        closed = (2 * p + 1) / (2 * p + 2)
        rows.append({
            "p": p,
            "mp_over_n": mp / args.n,
            "closed_form": closed,
            "deviation": mp / args.n - closed,
            "gammas": list(prev.best_schedule.gammas),
            "betas": list(prev.best_schedule.betas),
        })
    return {"n": args.n, "rows": rows}, [{k: r[k] for k in ("p", "mp_over_n", "closed_form", "deviation")} for r in rows]


def run_worst_case(args) -> tuple[dict, list[dict]]:
    grid = args.grid or 20
    wc = worst_case_ratio(grid, OptimizerConfig(seed=args.seed))
    results = wc.to_dict()
    results["samples"] = [list(row) for row in wc.samples]
    return results, [{"s": s, "t": t, "ratio": r} for s, t, r in wc.samples]


def run_certify(args) -> tuple[dict, list[dict]]:
    g = _read_graph(args.graph)
    try:
        cert = certify_instance(g, _optimizer_config(args))
    except SpecialCaseError:
        results = {
            "n": g.n_vertices, "S": None, "T": None, "M1": None,
            "cut_upper_bound": None, "ratio_lower_bound": None, "k4_special_case": True,
        }
        return results, [results]
    results = cert.to_dict()
    results["gamma"] = cert.schedule.gammas[0]
    results["beta"] = cert.schedule.betas[0]
    return results, [cert.to_dict()]


def run_mis(args) -> tuple[dict, list[dict]]:
    g = _read_graph(args.graph)
    _check_p(args)
    model = VariantModel(g, args.limit_basis)
    config = VariantConfig()
    if args.grid is not None:
        config.resolution = dict(config.resolution)
        config.resolution[args.p] = args.grid
    levels = []
    prev = None
    for p in range(1, args.p + 1):
        prev = maximize_variant(model, p, config, prev)
        levels.append(prev.to_dict())
    state = model.state(prev.best_schedule)
    shots = args.shots or 1000
    strings = sample_variant(model.basis, state, _rng(args.seed, SHOT_STREAM), shots)
    sizes = [s.count("1") for s in strings]
    best = int(np.argmax(sizes))
    results = {
        "n": g.n_vertices,
        "basis_size": model.basis.size,
        "p": args.p,
        "levels": levels,
        "fp": prev.best_value,
        "shots": shots,
        "sample_mean": float(np.mean(sizes)),
        "best_set": strings[best],
        "best_set_size": sizes[best],
        "variant": True,
    }
    if g.n_vertices <= 16:
        results["max_independent_set"] = int(model.weights.max())
    return results, [{"string": s, "size": k} for s, k in zip(strings, sizes)]


def _sweep_shard(target_text: str, p: int, points: list[list[float]], limit: int) -> list[float]:
    g = parse_graph(target_text)
    objective = make_objective(g, p, limit)
    return [objective(sv.AngleSchedule.from_vector(x)) for x in points]


def run_sweep(args) -> tuple[dict, list[dict]]:
    g = _read_graph(args.graph)
    _check_p(args)
    resolution = args.grid or 8
    n_points = resolution ** (2 * args.p)
    if n_points > OptimizerConfig().max_grid_evaluations:
        raise BudgetExceededError(f"{n_points} grid points exceeds the sweep budget")
    gammas, betas = grid_axes(resolution)
    objective = make_objective(g, args.p, args.limit_qubits)
    index = list(np.ndindex(*([resolution] * (2 * args.p))))
    points = [
        [gammas[i] for i in idx[: args.p]] + [betas[i] for i in idx[args.p:]] for idx in index
    ]
    if args.workers > 1:
        shards = [points[w:: args.workers] for w in range(args.workers)]
        with ProcessPoolExecutor(args.workers) as pool:
            parts = list(pool.map(
                _sweep_shard, [g.to_text()] * args.workers, [args.p] * args.workers,
                shards, [args.limit_qubits] * args.workers,
            ))
        values = [0.0] * len(points)
        for w, part in enumerate(parts):
            values[w:: args.workers] = part
    else:
        values = np.asarray(objective.grid_values(gammas, betas)).reshape(-1).tolist()
    table = []
    for x, val in zip(points, values):
        row = {f"gamma{i + 1}": x[i] for i in range(args.p)}
        row.update({f"beta{i + 1}": x[args.p + i] for i in range(args.p)})
        row["value"] = float(val)
        table.append(row)
    best = max(range(len(values)), key=lambda i: (values[i], -i))
    return {"p": args.p, "grid_resolution": resolution, "points": len(points), "best": table[best]}, table


COMMANDS = {
    "maxcut": run_maxcut,
    "ring": run_ring,
    "worst-case": run_worst_case,
    "certify": run_certify,
    "mis": run_mis,
    "sweep": run_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qaoakit", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=1)
    common.add_argument("--grid", type=int, default=None, help="grid points per axis")
    common.add_argument("--shots", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--limit-qubits", type=int, default=sv.DEFAULT_MAX_QUBITS)
    common.add_argument("--limit-basis", type=int, default=DEFAULT_MAX_BASIS)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("maxcut", "certify", "mis", "sweep"):
        cmd = sub.add_parser(name, parents=[common])
        cmd.add_argument("graph", help="edge-list file")
        if name == "sweep":
            cmd.add_argument("--workers", type=int, default=1)
    ring = sub.add_parser("ring", parents=[common])
    ring.add_argument("--n", type=int, default=100)
    ring.add_argument("--extended-ring", action="store_true", help="allow p up to 6")
    sub.add_parser("worst-case", parents=[common])
    return parser


def _config_dict(args) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "format")}
    return config


def _to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def _exit_code(exc: QaoaError) -> int:
    if isinstance(exc, GraphParseError):
        return EXIT_PARSE
    if isinstance(exc, ResourceLimitError):
        return EXIT_RESOURCE
    if isinstance(exc, BudgetExceededError):
        return EXIT_BUDGET
    return EXIT_INFEASIBLE


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        results, table = COMMANDS[args.command](args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except QaoaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    if args.format == "csv":
        text = _to_csv(table)
    else:
        envelope = {"config": _config_dict(args), "results": results, "version": __version__}
        text = json.dumps(envelope, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
