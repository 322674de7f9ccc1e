"""Command-line front end: attack | qre | gen | bench.

Emits one JSON result record per run (R rounded to 4 decimals, curve change
points as samples) and, for bench, a CSV matrix of R and runtime per
(network, strategy) cell with per-cell wall-clock timeouts.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import multiprocessing
import os
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .attack import StrategySpec, run_strategy
from .graph import Graph, GraphFormatError, load_edge_list, load_gml, write_edge_list
from .netgen import generate_ba, generate_er
from .qre import QreParams, qre_estimate

_STRATEGY_CHOICES = ("deg", "betw", "abet", "pr", "ci2", "ci3")
_BENCH_TOKENS = _STRATEGY_CHOICES + ("ideg", "ibet", "iabet", "ipr", "ici2", "ici3", "qre")


def _load_graph(path: str, fmt: str | None) -> Graph:
    if fmt is None:
        fmt = "gml" if Path(path).suffix.lower() == ".gml" else "edgelist"
    if fmt == "gml":
        return load_gml(path)
    return load_edge_list(path)


def _spec_from_flags(strategy: str, interactive: bool, args) -> StrategySpec:
    metric = "ci" if strategy in ("ci2", "ci3") else strategy
    return StrategySpec(
        metric=metric,
        mode="interactive" if interactive else "static",
        ball_radius=3 if strategy == "ci3" else 2,
        damping=args.damping,
        pivots=args.pivots,
        seed=args.seed,
        batch=args.batch,
    )


def _spec_from_token(token: str, seed: int) -> StrategySpec:
    name = token
    interactive = False
    if name.startswith("i"):
        interactive = True
        name = name[1:]
    if name == "bet":
        name = "betw"
    metric = "ci" if name in ("ci2", "ci3") else name
    return StrategySpec(
        metric=metric,
        mode="interactive" if interactive else "static",
        ball_radius=3 if name == "ci3" else 2,
        seed=seed,
    )


def _curve_samples(materialized: np.ndarray) -> list[list[float]]:
    """Change points of the materialized curve as [Q, gcs] pairs."""
    samples = [[0, float(materialized[0])]]
    for q in range(1, materialized.shape[0]):
        if materialized[q] != materialized[q - 1]:
            samples.append([q, float(materialized[q])])
    return samples


def _result_record(
    network_name: str,
    graph: Graph,
    strategy: str,
    params: dict,
    r: float,
    materialized: np.ndarray,
    runtime_ms: int,
) -> dict:
    return {
        "network_name": network_name,
        "N": graph.n,
        "M": graph.m,
        "strategy": strategy,
        "params": params,
        "R": round(float(r), 4),
        "samples": _curve_samples(materialized),
        "runtime_ms": runtime_ms,
        "tool_version": __version__,
    }


def _emit_json(record: dict, output: str | None) -> None:
    text = json.dumps(record, indent=2) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_curve_csv(materialized: np.ndarray, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("Q,gcs\n")
        for q in range(materialized.shape[0]):
            fh.write(f"{q},{float(materialized[q])!r}\n")


def cmd_attack(args) -> int:
    graph = _load_graph(args.input, args.format)
    spec = _spec_from_flags(args.strategy, args.interactive, args)
    start = time.perf_counter()
    curve = run_strategy(graph, spec)
    runtime_ms = int(round((time.perf_counter() - start) * 1000))
    params = {"seed": args.seed, "batch": args.batch}
    if spec.metric == "pr":
        params["damping"] = args.damping
    if spec.metric == "ci":
        params["ball_radius"] = spec.ball_radius
    if spec.metric == "abet":
        params["pivots"] = args.pivots
    record = _result_record(
        Path(args.input).stem, graph, spec.name, params, curve.r, curve.materialized, runtime_ms
    )
    _emit_json(record, args.output)
    if args.curve_csv:
        _emit_curve_csv(curve.materialized, args.curve_csv)
    return 0


def cmd_qre(args) -> int:
    graph = _load_graph(args.input, args.format)
    qre_params = QreParams(x=args.x, y=args.y, z=args.z, seed=args.seed, y_mode=args.y_mode)
    x, y, z = qre_params.resolve(graph.n)
    start = time.perf_counter()
    state = qre_estimate(graph, qre_params)
    runtime_ms = int(round((time.perf_counter() - start) * 1000))
    params = {"x": x, "y": y, "z": z, "seed": args.seed, "y_mode": args.y_mode}
    record = _result_record(
        Path(args.input).stem,
        graph,
        "qre",
        params,
        state.best_r,
        state.best_materialized,
        runtime_ms,
    )
    record["history"] = [round(h, 4) for h in state.history]
    _emit_json(record, args.output)
    if args.curve_csv:
        _emit_curve_csv(state.best_materialized, args.curve_csv)
    return 0


def cmd_gen(args, parser: argparse.ArgumentParser) -> int:
    if args.model == "ba":
        if args.m is None:
            parser.error("--model ba requires --m")
        graph = generate_ba(args.n, args.m, args.seed)
    else:
        if args.p is None:
            parser.error("--model er requires --p")
        graph = generate_er(args.n, args.p, args.seed)
    if args.output:
        write_edge_list(graph, args.output)
    else:
        write_edge_list(graph, sys.stdout)
    return 0


def _bench_worker(graph: Graph, token: str, seed: int, conn) -> None:
    start = time.perf_counter()
    if token == "qre":
        r = qre_estimate(graph, QreParams(seed=seed)).best_r
    else:
        r = run_strategy(graph, _spec_from_token(token, seed)).r
    runtime_ms = (time.perf_counter() - start) * 1000.0
    conn.send((float(r), runtime_ms))
    conn.close()


class _BenchJob:
    def __init__(self, net_index, token_index, graph, token, seed):
        self.net_index = net_index
        self.token_index = token_index
        self.graph = graph
        self.token = token
        self.seed = seed
        self.process = None
        self.conn = None
        self.deadline = None


def _run_bench_jobs(jobs: list[_BenchJob], threads: int, timeout_s: float | None):
    """Run each job in its own forked process, at most `threads` at once."""
    ctx = multiprocessing.get_context("fork")
    pending = list(jobs)
    running: list[_BenchJob] = []
    results: dict[tuple[int, int], tuple] = {}
    while pending or running:
        while pending and len(running) < threads:
            job = pending.pop(0)
            parent_conn, child_conn = ctx.Pipe(duplex=False)
            job.conn = parent_conn
            job.process = ctx.Process(
                target=_bench_worker, args=(job.graph, job.token, job.seed, child_conn)
            )
            job.process.start()
            child_conn.close()
            job.deadline = None if timeout_s is None else time.monotonic() + timeout_s
            running.append(job)
        time.sleep(0.005)
        still = []
        for job in running:
            key = (job.net_index, job.token_index)
            if job.conn.poll():
                outcome = results.setdefault(key, ("ok", []))
                try:
                    outcome[1].append(job.conn.recv())
                except EOFError:
                    results[key] = ("error", [])
                job.process.join()
                job.conn.close()
            elif not job.process.is_alive():
                results.setdefault(key, ("error", []))
                job.process.join()
                job.conn.close()
            elif job.deadline is not None and time.monotonic() > job.deadline:
                job.process.terminate()
                job.process.join()
                job.conn.close()
                results[key] = ("timeout", [])
            else:
                still.append(job)
        running = still
    return results


def cmd_bench(args, parser: argparse.ArgumentParser) -> int:
    tokens = [t.strip() for t in args.strategies.split(",") if t.strip()]
    if not tokens:
        parser.error("--strategies needs at least one strategy token")
    for t in tokens:
        if t not in _BENCH_TOKENS:
            parser.error(f"unknown strategy token {t!r}")
    threads = _resolve_threads(args.threads)
    networks = []
    for path in args.input:
        networks.append((Path(path).stem, _load_graph(path, args.format)))

    jobs = []
    for ni, (name, graph) in enumerate(networks):
        for ti, token in enumerate(tokens):
            seed = int(np.random.SeedSequence((args.seed, ni, ti)).generate_state(1)[0])
            for _ in range(args.repeats):
                jobs.append(_BenchJob(ni, ti, graph, token, seed))
    results = _run_bench_jobs(jobs, threads, args.timeout_s)

    rows = []
    for ni, (name, graph) in enumerate(networks):
        row = {"network": name, "n": graph.n, "m": graph.m}
        for ti, token in enumerate(tokens):
            status, outcomes = results.get((ni, ti), ("error", []))
            if status == "ok" and len(outcomes) == args.repeats:
                r_value = outcomes[0][0]
                ms = statistics.median(o[1] for o in outcomes)
                row[f"{token}_R"] = round(r_value, 4)
                row[f"{token}_ms"] = int(round(ms))
            else:
                label = status if status != "ok" else "timeout"
                row[f"{token}_R"] = label
                row[f"{token}_ms"] = label
        rows.append(row)

    fieldnames = ["network", "n", "m"]
    for token in tokens:
        fieldnames.extend([f"{token}_R", f"{token}_ms"])
    out = open(args.output, "w", encoding="utf-8", newline="") if args.output else sys.stdout
    with contextlib.ExitStack() as stack:
        if args.output:
            stack.callback(out.close)
        writer = csv.DictWriter(out, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    return 0


def _resolve_threads(flag_value: int | None) -> int:
    if flag_value is not None:
        return max(1, flag_value)
    env = os.environ.get("NETQUAKE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            print(f"warning: ignoring non-integer NETQUAKE_THREADS={env!r}", file=sys.stderr)
    return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netquake",
        description="Estimate attack robustness R of undirected networks.",
    )
    parser.add_argument("--version", action="version", version=f"netquake {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_shared(p, with_input=True):
        if with_input:
            p.add_argument("--input", required=True, help="input graph file")
            p.add_argument("--format", choices=("edgelist", "gml"), default=None,
                           help="input format (default: by file suffix)")
        p.add_argument("--output", default=None, help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None,
                       help="worker processes (default: NETQUAKE_THREADS or 1)")

    p_attack = sub.add_parser("attack", help="run one attack strategy")
    add_shared(p_attack)
    p_attack.add_argument("--strategy", required=True, choices=_STRATEGY_CHOICES)
    p_attack.add_argument("--interactive", action="store_true",
                          help="recompute the metric during the attack")
    p_attack.add_argument("--batch", type=int, default=1,
                          help="removals between interactive recomputations")
    p_attack.add_argument("--damping", type=float, default=0.85)
    p_attack.add_argument("--pivots", type=int, default=None,
                          help="abet pivot count (default: scaled budget)")
    p_attack.add_argument("--curve-csv", default=None, help="also write the dense Q,gcs curve")

    p_qre = sub.add_parser("qre", help="two-stage quick robustness estimate")
    add_shared(p_qre)
    p_qre.add_argument("--x", type=int, default=100)
    p_qre.add_argument("--y", type=int, default=None)
    p_qre.add_argument("--z", type=int, default=None)
    p_qre.add_argument("--y-mode", choices=("scaled", "paper_literal"), default="scaled")
    p_qre.add_argument("--curve-csv", default=None, help="also write the dense Q,gcs curve")

    p_gen = sub.add_parser("gen", help="generate a random network as an edge list")
    add_shared(p_gen, with_input=False)
    p_gen.add_argument("--model", required=True, choices=("ba", "er"))
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--m", type=int, default=None, help="edges per new node (ba)")
    p_gen.add_argument("--p", type=float, default=None, help="pair probability (er)")

    p_bench = sub.add_parser("bench", help="R/runtime matrix over networks and strategies")
    p_bench.add_argument("--input", nargs="+", required=True, help="input graph files")
    p_bench.add_argument("--format", choices=("edgelist", "gml"), default=None)
    p_bench.add_argument("--strategies", required=True,
                         help="comma-separated tokens, e.g. ideg,ibet,qre")
    p_bench.add_argument("--repeats", type=int, default=1)
    p_bench.add_argument("--timeout-s", type=float, default=None,
                         help="wall-clock limit per cell run")
    p_bench.add_argument("--output", default=None, help="CSV file (default: stdout)")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--threads", type=int, default=None,
                         help="concurrent cell processes (default: NETQUAKE_THREADS or 1)")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "attack":
            return cmd_attack(args)
        if args.command == "qre":
            return cmd_qre(args)
        if args.command == "gen":
            return cmd_gen(args, parser)
        if args.command == "bench":
            return cmd_bench(args, parser)
    except (GraphFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
