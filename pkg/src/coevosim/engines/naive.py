"""Enumerating reference simulator.

Every step regenerates an exponential waiting time for every potential
reaction (each infected node, each SI and II edge, each non-adjacent
susceptible pair), takes the minimum and applies that event. Each step is
O(n^2) work and every step is accepted. Memorylessness of the exponential
distribution makes regenerating all waiting times each step statistically
valid. Exists as a correctness and timing reference, not for use at scale.
"""

from __future__ import annotations

import time

import numpy as np

from ..errors import UsageError
from ..events import (
    CONNECT,
    DISCONNECT,
    NO_NODE,
    RECOVERY,
    TRANSMISSION,
    EventLog,
    StepStats,
)
from ..params import Params
from ..state import I, S, SimState

DEFAULT_MAX_N = 2000


def run(
    state: SimState,
    params: Params,
    seed: int,
    *,
    recorder=None,
    record_events: bool = True,
    max_steps: int | None = None,
    timeout: float | None = None,
    early_exit: bool = False,
    max_n: int = DEFAULT_MAX_N,
) -> tuple[EventLog, StepStats]:
    """Simulate to the horizon, mutating ``state`` in place.

    Refuses n > ``max_n`` (quadratic per-step cost and memory).
    """
    n = state.n
    if n > max_n:
        raise UsageError(f"naive simulator capped at n <= {max_n} (got {n})")
    rng = np.random.default_rng(seed)
    horizon = params.horizon
    alpha, beta, a, b = params.alpha, params.beta, params.a, params.b

    adj = np.zeros((n, n), dtype=bool)
    for v1, v2 in state.edges:
        adj[v1, v2] = adj[v2, v1] = True
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)

    times: list[float] = []
    kinds: list[int] = []
    node_a: list[int] = []
    node_b: list[int] = []
    stats = StepStats()
    complete = n * (n - 1) // 2
    start = time.process_time_ns()

    while state.t < horizon:
        # Candidate reactions: (dt, kind, v1, v2) with the smallest dt wins.
        best_dt = np.inf
        best = None

        if alpha > 0 and state.infected_count > 0:
            infected = np.flatnonzero(state.states == I)
            dts = rng.exponential(1.0 / alpha, size=infected.size)
            i = int(np.argmin(dts))
            if dts[i] < best_dt:
                best_dt = float(dts[i])
                best = (RECOVERY, int(infected[i]), NO_NODE)

        edge_arr = state.edges.to_array()
        if edge_arr.size:
            st1 = state.states[edge_arr[:, 0]]
            st2 = state.states[edge_arr[:, 1]]
            infected_ends = (st1 == I).astype(np.int8) + (st2 == I).astype(np.int8)
            if beta > 0:
                si = np.flatnonzero(infected_ends == 1)
                if si.size:
                    dts = rng.exponential(1.0 / beta, size=si.size)
                    i = int(np.argmin(dts))
                    if dts[i] < best_dt:
                        e = edge_arr[si[i]]
                        best_dt = float(dts[i])
                        best = (TRANSMISSION, int(e[0]), int(e[1]))
            if b > 0:
                ii = np.flatnonzero(infected_ends == 2)
                if ii.size:
                    dts = rng.exponential(1.0 / b, size=ii.size)
                    i = int(np.argmin(dts))
                    if dts[i] < best_dt:
                        e = edge_arr[ii[i]]
                        best_dt = float(dts[i])
                        best = (DISCONNECT, int(e[0]), int(e[1]))

        if a > 0:
            s_mask = state.states == S
            open_pairs = (s_mask[:, None] & s_mask[None, :]) & upper & ~adj
            pu, pv = np.nonzero(open_pairs)
            if pu.size:
                dts = rng.exponential(1.0 / a, size=pu.size)
                i = int(np.argmin(dts))
                if dts[i] < best_dt:
                    best_dt = float(dts[i])
                    best = (CONNECT, int(pu[i]), int(pv[i]))

        if best is None:
            state.t = horizon
            break
        t_next = state.t + best_dt
        if t_next > horizon:
            state.t = horizon
            break
        state.t = t_next

        kind, v1, v2 = best
        if kind == RECOVERY:
            state.set_node_state(v1, S)
        elif kind == TRANSMISSION:
            state.set_node_state(v2 if state.states[v1] == I else v1, I)
        elif kind == DISCONNECT:
            state.remove_edge(v1, v2)
            adj[v1, v2] = adj[v2, v1] = False
        else:
            state.add_edge(v1, v2)
            adj[v1, v2] = adj[v2, v1] = True

        stats.accepted += 1
        if record_events:
            times.append(t_next)
            kinds.append(kind)
            node_a.append(v1)
            node_b.append(v2)
        if recorder is not None:
            nodes = (v1,) if v2 == NO_NODE else (v1, v2)
            recorder(t_next, kind, nodes)
        if max_steps is not None and stats.accepted >= max_steps:
            break
        if early_exit and state.infected_count == 0 and state.edge_count == complete:
            state.t = horizon
            break
        if timeout is not None \
                and (time.process_time_ns() - start) / 1e9 > timeout:
            stats.timed_out = True
            break

    stats.wall_ns = time.process_time_ns() - start
    return EventLog(times, kinds, node_a, node_b), stats
