"""Command-line front end.

Subcommands:
  simulate      run replicas, write trajectory (and optionally event) CSVs
  sweep         simulate over (beta_prime, a_prime, b) triples, count waves
  bench         time the simulators over a size matrix
  oracle-check  compare every simulator against the exact small-system answer
  gen-graph     write an initial graph as an edge list

All outputs are CSV with `#`-prefixed comment lines carrying the tool
version, the resolved configuration (including the measured mean degree
used for rate scaling), and the seed. Values on the command line
override config-file values, which override built-in defaults. Exit
codes: 0 success, 1 failed check or write failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import __version__
from .bench import (DEFAULT_ALGORITHMS, DEFAULT_RUNS, DEFAULT_SIZES,
                    run_benchmark, write_csv)
from .config import RunConfig, header_lines, load_config, merge_config
from .engines import ALGORITHMS, simulate
from .errors import UsageError
from .events import KIND_NAMES, EventLog
from .generators import GRAPH_KINDS, build_graph, init_infected
from .observables import Trajectory, count_waves, make_grid, record_on_grid
from .oracle import point_distribution, build_generator, transient_expectations
from .rngtools import (GRAPH_STREAM, INIT_STREAM, SIM_STREAM, derive_generator,
                       derive_seed, replica_seed)
from .state import I, SimState

ORACLE_CHECK_DEFAULTS = {"n": 3, "replicas": 20000, "horizon": 1.0}
ORACLE_Z_LIMIT = 3.0


def _num(x) -> str:
    """Shortest exact decimal form; keeps reruns byte-identical."""
    return repr(float(x))


@contextmanager
def _open_out(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _emit(fh, headers, columns, rows) -> None:
    for line in headers:
        fh.write(f"# {line}\n")
    fh.write(",".join(columns) + "\n")
    for row in rows:
        fh.write(",".join(row) + "\n")


def _build_config(args, defaults=None) -> RunConfig:
    layers = []
    if defaults:
        layers.append(defaults)
    if getattr(args, "config", None):
        layers.append(load_config(args.config))
    cli = {f.name: getattr(args, f.name)
           for f in fields(RunConfig) if hasattr(args, f.name)}
    layers.append(cli)
    return merge_config(None, *layers)


def _map_replicas(jobs: int, worker, count: int) -> list:
    if jobs <= 1:
        return [worker(r) for r in range(count)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, range(count)))


def _run_batch(cfg: RunConfig, jobs: int = 1):
    """Shared initial graph, per-replica infection and dynamics seeds."""
    base = build_graph(cfg.graph_spec(),
                       derive_generator(cfg.seed, GRAPH_STREAM))
    mean_degree = base.mean_degree
    params = cfg.resolve(mean_degree)
    grid = make_grid(cfg.horizon, cfg.grid)

    def one(replica: int) -> tuple[Trajectory, EventLog]:
        state = base.copy()
        rs = replica_seed(cfg.seed, replica)
        init_infected(state, cfg.infected_frac,
                      derive_generator(rs, INIT_STREAM))
        initial = state.copy()
        log, stats = simulate(state, params, rs,
                              algorithm=cfg.algorithm, backend=cfg.backend,
                              timeout=cfg.timeout_secs)
        if stats.timed_out:
            print(f"warning: replica {replica} timed out at t={state.t:g}",
                  file=sys.stderr)
        return record_on_grid(log, initial, grid, replica_id=replica), log

    results = _map_replicas(jobs, one, cfg.replicas)
    return params, mean_degree, results


def _write_trajectories(fh, headers, results) -> None:
    rows = ((str(traj.replica_id), _num(t), _num(p), _num(d))
            for traj, _ in results
            for t, p, d in zip(traj.grid, traj.prevalence, traj.mean_degree))
    _emit(fh, headers, ("replica", "time", "prevalence", "mean_degree"), rows)


def _write_events(fh, headers, results) -> None:
    def rows():
        for traj, log in results:
            rid = str(traj.replica_id)
            for t, kind, va, vb in zip(log.times, log.kinds,
                                       log.node_a, log.node_b):
                yield (rid, _num(t), KIND_NAMES[kind], str(va),
                       "" if vb < 0 else str(vb))
    _emit(fh, headers, ("replica", "time", "kind", "node_a", "node_b"),
          rows())


def cmd_simulate(args) -> int:
    cfg = _build_config(args)
    params, mean_degree, results = _run_batch(cfg, jobs=args.jobs)
    headers = header_lines(__version__, cfg, params, mean_degree)
    with _open_out(cfg.out) as fh:
        _write_trajectories(fh, headers, results)
    if cfg.events_out is not None:
        with _open_out(cfg.events_out) as fh:
            _write_events(fh, headers, results)
    return 0


def _triple_path(out: str, index: int) -> str:
    p = Path(out)
    return str(p.with_name(f"{p.stem}.triple{index}{p.suffix or '.csv'}"))


def cmd_sweep(args) -> int:
    cfg = _build_config(args)
    if not cfg.triples:
        raise UsageError(
            "sweep needs at least one beta_prime,a_prime,b triple")
    summary = []
    for i, (beta_prime, a_prime, b) in enumerate(cfg.triples):
        sub = cfg.with_values(beta_prime=beta_prime, a_prime=a_prime, b=b)
        params, mean_degree, results = _run_batch(sub, jobs=args.jobs)
        headers = header_lines(__version__, sub, params, mean_degree,
                               extra=[f"triple={i}"])
        if cfg.out is not None:
            with _open_out(_triple_path(cfg.out, i)) as fh:
                _write_trajectories(fh, headers, results)
        for traj, _ in results:
            waves = count_waves(traj.prevalence, cfg.wave_window,
                                cfg.wave_prominence)
            summary.append((_num(beta_prime), _num(a_prime), _num(b),
                            str(traj.replica_id), str(waves)))
    headers = header_lines(__version__, cfg, None, None)
    with _open_out(cfg.out) as fh:
        _emit(fh, headers,
              ("beta_prime", "a_prime", "b", "replica", "wave_count"),
              summary)
    return 0


def _parse_csv_list(text: str, convert, what: str) -> tuple:
    try:
        items = tuple(convert(part) for part in text.split(",") if part)
    except ValueError:
        raise UsageError(f"bad {what} list {text!r}")
    if not items:
        raise UsageError(f"empty {what} list")
    return items


def cmd_bench(args) -> int:
    cfg = _build_config(args)
    if args.algorithms is not None:
        algorithms = _parse_csv_list(args.algorithms, str, "algorithm")
    elif getattr(args, "algorithm", None) is not None:
        algorithms = (args.algorithm,)
    else:
        algorithms = DEFAULT_ALGORITHMS
    for algorithm in algorithms:
        if algorithm not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {algorithm!r}")
    sizes = (DEFAULT_SIZES if args.sizes is None
             else _parse_csv_list(args.sizes, int, "size"))
    runs = args.runs if args.runs is not None else DEFAULT_RUNS
    settings = {"algorithms": list(algorithms), "graph": cfg.graph,
                "sizes": list(sizes), "runs": runs, "horizon": cfg.horizon,
                "seed": cfg.seed, "timeout_secs": cfg.timeout_secs,
                "backend": cfg.backend}
    results = run_benchmark(
        algorithms=algorithms, graph_kinds=(cfg.graph,), sizes=sizes,
        runs=runs, horizon=cfg.horizon, seed=cfg.seed,
        timeout=cfg.timeout_secs, backend=cfg.backend,
        progress=args.progress)
    headers = [f"coevosim {__version__}", f"seed={cfg.seed}",
               "config=" + json.dumps(
                   {k: v for k, v in settings.items() if v is not None},
                   sort_keys=True)]
    with _open_out(cfg.out) as fh:
        write_csv(results, fh, headers)
    return 0


def _complete_state(n: int) -> SimState:
    state = SimState(n)
    for v1 in range(n):
        for v2 in range(v1 + 1, n):
            state.add_edge(v1, v2)
    return state


def cmd_oracle_check(args) -> int:
    cfg = _build_config(args, ORACLE_CHECK_DEFAULTS)
    algorithms = ((args.algorithm,) if args.algorithm is not None
                  else ALGORITHMS)
    base = _complete_state(cfg.n)
    base.set_node_state(0, I)
    mean_degree = base.mean_degree
    params = cfg.resolve(mean_degree)
    q = build_generator(cfg.n, params)
    p0 = point_distribution(cfg.n, [0], base.edges)
    exact_prev, exact_edges, _ = transient_expectations(
        q, p0, cfg.horizon, cfg.n)
    exact = {"prevalence": exact_prev, "edge_count": exact_edges}

    rows, worst = [], 0.0
    for alg_index, algorithm in enumerate(algorithms):
        prev = np.empty(cfg.replicas)
        edges = np.empty(cfg.replicas)
        for r in range(cfg.replicas):
            state = base.copy()
            sim_seed = derive_seed(replica_seed(cfg.seed, r),
                                   SIM_STREAM, alg_index)
            simulate(state, params, sim_seed, algorithm=algorithm,
                     backend=cfg.backend, record_events=False)
            prev[r] = state.prevalence
            edges[r] = state.edge_count
        for name, sample in (("prevalence", prev), ("edge_count", edges)):
            est = sample.mean()
            se = sample.std(ddof=1) / np.sqrt(cfg.replicas)
            dev = est - exact[name]
            z = dev / se if se > 0 else (0.0 if dev == 0 else float("inf"))
            worst = max(worst, abs(z))
            rows.append((algorithm, name, _num(est), _num(exact[name]),
                         _num(se), f"{z:.3f}"))
    headers = header_lines(
        __version__, cfg, params, mean_degree,
        extra=[f"complete graph on n={cfg.n}, node 0 infected, t={cfg.horizon:g}",
               f"limit=|z| <= {ORACLE_Z_LIMIT:g}"])
    with _open_out(cfg.out) as fh:
        _emit(fh, headers,
              ("algorithm", "observable", "estimate", "exact", "std_err", "z"),
              rows)
    if worst > ORACLE_Z_LIMIT:
        print(f"oracle check FAILED: worst |z| = {worst:.3f}",
              file=sys.stderr)
        return 1
    return 0


def cmd_gen_graph(args) -> int:
    cfg = _build_config(args)
    state = build_graph(cfg.graph_spec(),
                        derive_generator(cfg.seed, GRAPH_STREAM))
    headers = header_lines(__version__, cfg, None, state.mean_degree)
    with _open_out(cfg.out) as fh:
        for line in headers:
            fh.write(f"# {line}\n")
        fh.write(f"n={state.n}\n")
        for v1, v2 in state.edges:
            fh.write(f"{v1} {v2}\n")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("shared options")
    g.add_argument("--config", metavar="FILE",
                   help="flat JSON config file; flags override it")
    g.add_argument("--graph", choices=GRAPH_KINDS)
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=float, help="er edge probability")
    g.add_argument("--m", type=int, help="ba edges per new node")
    g.add_argument("--degree-target", type=float,
                   help="geom mean-degree target")
    g.add_argument("--alpha", type=float, help="recovery rate")
    g.add_argument("--beta", type=float, help="absolute transmission rate")
    g.add_argument("--beta-prime", type=float,
                   help="transmission rate as beta/<d> multiple")
    g.add_argument("--a", type=float, help="absolute association rate")
    g.add_argument("--a-prime", type=float,
                   help="association rate as a*n multiple")
    g.add_argument("--b", type=float, help="dissociation rate")
    g.add_argument("--horizon", type=float)
    g.add_argument("--infected-frac", type=float)
    g.add_argument("--replicas", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--algorithm", choices=ALGORITHMS)
    g.add_argument("--backend", choices=("auto", "compiled", "pure"))
    g.add_argument("--grid", type=int, help="trajectory sample points")
    g.add_argument("--out", metavar="FILE", help="default: stdout")
    g.add_argument("--events-out", metavar="FILE")
    g.add_argument("--timeout-secs", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coevosim",
        description="SIS epidemics on coevolving contact networks")
    parser.add_argument("--version", action="version",
                        version=f"coevosim {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("simulate", help="run replicas, write trajectories")
    _add_common(p)
    p.add_argument("--jobs", type=int, default=1,
                   help="replicas run in this many threads")
    p.set_defaults(func=cmd_simulate)

    p = subs.add_parser("sweep",
                        help="simulate over beta_prime,a_prime,b triples")
    _add_common(p)
    p.add_argument("--triples", nargs="+", metavar="BP,AP,B",
                   help="one or more beta_prime,a_prime,b triples")
    p.add_argument("--wave-window", type=int,
                   help="smoothing window in grid points")
    p.add_argument("--wave-prominence", type=float,
                   help="minimum peak prominence")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("bench", help="time the simulators")
    _add_common(p)
    p.add_argument("--algorithms", metavar="A,B,...",
                   help="comma-separated; default all three")
    p.add_argument("--sizes", metavar="N,N,...",
                   help=f"default {','.join(map(str, DEFAULT_SIZES))}")
    p.add_argument("--runs", type=int,
                   help=f"timed runs per cell, default {DEFAULT_RUNS}")
    p.add_argument("--progress", action="store_true",
                   help="per-run progress on stderr")
    p.set_defaults(func=cmd_bench)

    p = subs.add_parser(
        "oracle-check",
        help="compare simulators against the exact distribution (n <= 5)")
    _add_common(p)
    p.set_defaults(func=cmd_oracle_check)

    p = subs.add_parser("gen-graph", help="write an initial graph edge list")
    _add_common(p)
    p.set_defaults(func=cmd_gen_graph)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
