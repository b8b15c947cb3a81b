"""Runtime benchmark: mean CPU time per accepted step vs network size.

Protocol per cell (algorithm, graph kind, n): generate the graph, infect
10% of nodes, simulate to the horizon; wall time covers the stepping
loop only (process CPU time), divided by accepted events. One warm-up
run per cell is discarded. Cells run strictly sequentially. A cell an
algorithm refuses (size guard) or that exceeds the per-run timeout is
emitted with the skip marker instead of numbers.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Iterable, Sequence

from .engines import simulate
from .errors import UsageError
from .generators import GraphSpec, build_graph, init_infected
from .params import resolve_params
from .rngtools import GRAPH_STREAM, INIT_STREAM, derive_generator

DEFAULT_SIZES = (100, 1000, 10_000, 100_000)
DEFAULT_ALGORITHMS = ("icon", "fast", "naive")
DEFAULT_RUNS = 5
DEFAULT_HORIZON = 20.0

# Default per-algorithm size ceilings for the benchmark matrix; the
# engines enforce their own guards, these just mark the skip cells
# up front instead of tripping exceptions.
SIZE_CAPS = {"icon": None, "fast": 10_000, "naive": 1000}

CSV_COLUMNS = ("algorithm", "graph", "n", "run", "accepted_steps",
               "wall_time_ns", "time_per_step_ns", "skipped")


@dataclass(frozen=True)
class BenchResult:
    """One timed run (or one skip marker) of a benchmark cell."""

    algorithm: str
    graph: str
    n: int
    run: int
    accepted_steps: int = 0
    wall_time_ns: int = 0
    skipped: bool = False

    @property
    def time_per_step_ns(self) -> float:
        return self.wall_time_ns / self.accepted_steps

    def csv_row(self) -> str:
        if self.skipped:
            return (f"{self.algorithm},{self.graph},{self.n},{self.run},,,,1")
        return (f"{self.algorithm},{self.graph},{self.n},{self.run},"
                f"{self.accepted_steps},{self.wall_time_ns},"
                f"{self.time_per_step_ns:.1f},0")


def default_graph_spec(kind: str, n: int) -> GraphSpec:
    """Benchmark graphs: ER p=5/(n-1), BA m=5, geometric <d> = 5."""
    if kind == "er":
        return GraphSpec(kind="er", n=n, p=5.0 / (n - 1))
    if kind == "ba":
        return GraphSpec(kind="ba", n=n, m=5)
    if kind == "geom":
        return GraphSpec(kind="geom", n=n, target_mean_degree=5.0)
    raise UsageError(f"unknown graph kind {kind!r}")


def run_benchmark(
    *,
    algorithms: Sequence[str] = DEFAULT_ALGORITHMS,
    graph_kinds: Sequence[str] = ("er",),
    sizes: Sequence[int] = DEFAULT_SIZES,
    runs: int = DEFAULT_RUNS,
    horizon: float = DEFAULT_HORIZON,
    seed: int = 0,
    timeout: float | None = None,
    backend: str | None = None,
    progress: bool = False,
) -> list[BenchResult]:
    """Time every cell of the matrix; one warm-up run per cell discarded.

    The model parameters are tied to the graph (infection rate scaled by
    the measured mean degree, association rate by 1/n) so one setting
    spans all sizes. Returns one BenchResult per (cell, run), runs
    numbered from 0, skip markers included.
    """
    if runs < 1:
        raise UsageError("need at least one run per cell")
    results: list[BenchResult] = []
    for algorithm in algorithms:
        for kind in graph_kinds:
            for n in sizes:
                cap = SIZE_CAPS.get(algorithm)
                if cap is not None and n > cap:
                    for run in range(runs):
                        results.append(BenchResult(algorithm, kind, n, run,
                                                   skipped=True))
                    continue
                spec = default_graph_spec(kind, n)
                for run in range(-1, runs):  # run -1 is the warm-up
                    cell_seed = seed + run + 1
                    state = build_graph(
                        spec, derive_generator(seed, GRAPH_STREAM, n))
                    init_infected(
                        state, 0.1,
                        derive_generator(cell_seed, INIT_STREAM, n))
                    params = resolve_params(
                        alpha=1.0, b=2.0, horizon=horizon, n=n,
                        mean_degree=state.mean_degree,
                        beta_prime=3.0, a_prime=2.0)
                    _, stats = simulate(
                        state, params, cell_seed,
                        algorithm=algorithm, backend=backend,
                        record_events=False, timeout=timeout)
                    if run < 0:
                        continue
                    if stats.timed_out or stats.accepted == 0:
                        results.append(BenchResult(algorithm, kind, n, run,
                                                   skipped=True))
                    else:
                        results.append(BenchResult(
                            algorithm, kind, n, run,
                            accepted_steps=stats.accepted,
                            wall_time_ns=stats.wall_ns))
                    if progress:
                        print(f"  {algorithm}/{kind}/n={n} run {run}: "
                              f"{results[-1].csv_row()}", file=sys.stderr)
    return results


def mean_time_per_step(results: Iterable[BenchResult],
                       algorithm: str, kind: str, n: int) -> float | None:
    """Mean of per-run time-per-step for one cell; None if all skipped."""
    vals = [r.time_per_step_ns for r in results
            if r.algorithm == algorithm and r.graph == kind
            and r.n == n and not r.skipped]
    if not vals:
        return None
    return sum(vals) / len(vals)


def write_csv(results: Sequence[BenchResult], fh, header_lines=()) -> None:
    for line in header_lines:
        fh.write(f"# {line}\n")
    fh.write(",".join(CSV_COLUMNS) + "\n")
    for r in results:
        fh.write(r.csv_row() + "\n")
