"""Initial graph construction and infection seeding.

Three generators, all returning an all-susceptible ``SimState``:
  * Erdos-Renyi G(n, p)
  * Barabasi-Albert preferential attachment (complete seed graph on m nodes)
  * random geometric graph on the unit square, radius calibrated so the
    interior expected degree matches ``target_mean_degree``

All generators are deterministic given (arguments, generator state) and
produce simple graphs with canonical edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .errors import UsageError
from .state import I, S, STATE_CODES, STATE_NAMES, SimState

GRAPH_KINDS = ("er", "ba", "geom")


@dataclass(frozen=True)
class GraphSpec:
    """Which generator to run and with what parameter."""

    kind: str
    n: int
    p: float | None = None                  # er
    m: int | None = None                    # ba
    target_mean_degree: float | None = None  # geom

    def __post_init__(self):
        if self.kind not in GRAPH_KINDS:
            raise UsageError(f"unknown graph kind {self.kind!r}")
        if self.n < 2:
            raise UsageError("need n >= 2")


def _state_from_edge_array(n: int, pairs: np.ndarray) -> SimState:
    state = SimState(n)
    for v1, v2 in pairs:
        state.edges.insert(int(v1), int(v2))
    return state


def _sample_distinct_uniform(rng: np.random.Generator, k: int, m: int) -> np.ndarray:
    """k distinct uniform integers from [0, m), without materializing [0, m).

    Sequential rejection of repeats; exact sampling without replacement.
    Only sensible for k much smaller than m.
    """
    chosen: list[np.ndarray] = []
    seen: set[int] = set()
    need = k
    while need > 0:
        batch = rng.integers(0, m, size=need + 16, dtype=np.int64)
        fresh = []
        for x in batch:
            xi = int(x)
            if xi not in seen:
                seen.add(xi)
                fresh.append(xi)
                if len(seen) == k:
                    break
        chosen.append(np.array(fresh, dtype=np.int64))
        need = k - len(seen)
    return np.concatenate(chosen) if chosen else np.empty(0, dtype=np.int64)


def _decode_pair_index(x: np.ndarray, n: int) -> np.ndarray:
    """Map linear indices over the upper triangle to (u, v) pairs, u < v.

    Linearization: index(u, v) = u*(2n - u - 1)/2 + (v - u - 1).
    """
    x = x.astype(np.float64)
    u = np.floor(((2 * n - 1) - np.sqrt((2 * n - 1) ** 2 - 8 * x)) / 2).astype(np.int64)
    # Guard against float rounding at row boundaries.
    for _ in range(2):
        base = u * (2 * n - u - 1) // 2
        u = np.where(base > x.astype(np.int64), u - 1, u)
        nxt = (u + 1) * (2 * n - u - 2) // 2
        u = np.where(nxt <= x.astype(np.int64), u + 1, u)
    base = u * (2 * n - u - 1) // 2
    v = x.astype(np.int64) - base + u + 1
    return np.stack([u, v], axis=1)


def gen_erdos_renyi(n: int, p: float, rng: np.random.Generator) -> SimState:
    """G(n, p): each unordered pair is an edge independently with prob p.

    Implemented as: draw the edge count from Binomial(n(n-1)/2, p), then
    that many distinct uniform pairs, which yields the same distribution
    without touching all pairs.
    """
    if not 0.0 <= p <= 1.0:
        raise UsageError("p must be in [0, 1]")
    total = n * (n - 1) // 2
    k = int(rng.binomial(total, p)) if p > 0 else 0
    if k == 0:
        return SimState(n)
    if k > 50_000_000:
        raise UsageError(f"refusing to materialize {k} edges")
    idx = _sample_distinct_uniform(rng, k, total)
    return _state_from_edge_array(n, _decode_pair_index(idx, n))


def gen_barabasi_albert(n: int, m: int, rng: np.random.Generator) -> SimState:
    """Preferential attachment: complete seed graph on m nodes, then each
    new node attaches m edges to distinct existing nodes with probability
    proportional to degree. Final edge count is m(m-1)/2 + (n-m)m exactly.
    """
    if not 1 <= m < n:
        raise UsageError("need 1 <= m < n")
    state = SimState(n)
    # Endpoint multiset: each node appears once per incident edge.
    endpoints: list[int] = []
    for u in range(m):
        for v in range(u + 1, m):
            state.edges.insert(u, v)
            endpoints.append(u)
            endpoints.append(v)
    for new in range(m, n):
        targets: set[int] = set()
        while len(targets) < m:
            if endpoints:
                t = endpoints[int(rng.integers(len(endpoints)))]
            else:
                t = int(rng.integers(new))  # m=1 seed has no edges yet
            targets.add(t)
        for t in targets:
            state.edges.insert(new, t)
            endpoints.append(new)
            endpoints.append(t)
    return state


def geometric_radius(n: int, target_mean_degree: float) -> float:
    """Radius giving interior points an expected degree of the target."""
    if target_mean_degree <= 0 or target_mean_degree >= n - 1:
        raise UsageError("target mean degree must be in (0, n-1)")
    return math.sqrt(target_mean_degree / (n * math.pi))


def gen_geometric(n: int, target_mean_degree: float, rng: np.random.Generator) -> SimState:
    """Random geometric graph: n uniform points on the unit square,
    connecting pairs within the calibrated radius. Boundary effects pull
    the measured mean degree somewhat below the target.
    """
    r = geometric_radius(n, target_mean_degree)
    if r >= math.sqrt(2):
        raise UsageError("radius reaches the square diagonal; graph degenerate")
    points = rng.random((n, 2))
    pairs = cKDTree(points).query_pairs(r, output_type="ndarray")
    return _state_from_edge_array(n, pairs)


def build_graph(spec: GraphSpec, rng: np.random.Generator) -> SimState:
    if spec.kind == "er":
        if spec.p is None:
            raise UsageError("er graph needs p")
        return gen_erdos_renyi(spec.n, spec.p, rng)
    if spec.kind == "ba":
        if spec.m is None:
            raise UsageError("ba graph needs m")
        return gen_barabasi_albert(spec.n, spec.m, rng)
    if spec.target_mean_degree is None:
        raise UsageError("geom graph needs target_mean_degree")
    return gen_geometric(spec.n, spec.target_mean_degree, rng)


def init_infected(state: SimState, fraction: float, rng: np.random.Generator) -> SimState:
    """Infect exactly round(fraction * n) distinct nodes, uniformly chosen."""
    if not 0.0 <= fraction <= 1.0:
        raise UsageError("fraction must be in [0, 1]")
    k = int(math.floor(fraction * state.n + 0.5))
    for v in rng.choice(state.n, size=k, replace=False):
        state.set_node_state(int(v), I)
    return state


# ---------------------------------------------------------------------------
# Edge-list text format: header line "n=<count>", then one "u v" pair per
# line (zero-based). Node states: one "v S" or "v I" line per node.

def write_edge_list(path, state: SimState) -> None:
    with open(path, "w") as fh:
        fh.write(f"n={state.n}\n")
        for v1, v2 in state.edges:
            fh.write(f"{v1} {v2}\n")


def read_edge_list(path) -> SimState:
    lines = Path(path).read_text().splitlines()
    body = [ln.strip() for ln in lines if ln.strip() and not ln.startswith("#")]
    if not body or not body[0].startswith("n="):
        raise UsageError(f"{path}: missing 'n=<count>' header")
    n = int(body[0][2:])
    state = SimState(n)
    for ln in body[1:]:
        v1, v2 = ln.split()
        state.add_edge(int(v1), int(v2))
    return state


def write_states(path, state: SimState) -> None:
    with open(path, "w") as fh:
        for v in range(state.n):
            fh.write(f"{v} {STATE_NAMES[int(state.states[v])]}\n")


def read_states(path, state: SimState) -> SimState:
    for ln in Path(path).read_text().splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        v, name = ln.split()
        state.set_node_state(int(v), STATE_CODES[name])
    return state
