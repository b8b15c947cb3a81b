"""Rejection-free baseline with maintained event lists.

Four collections are kept current at all times: infected nodes, SI edges,
II edges and non-adjacent susceptible pairs. Their sizes give the exact
class rates, so every step draws one holding time, picks a class
proportionally, applies a uniform member and then repairs the collections
touching only what the flip affected. No step is ever rejected.

The repair cost after an infection or recovery is proportional to the
flipped node's degree plus its susceptible non-neighbor count; the pair
list itself holds up to O(n^2) entries. That is the scaling gap this
baseline is expected to expose, and why it is memory-guarded.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from random import Random

import numpy as np

from ..errors import UsageError
from ..events import (
    CONNECT,
    DISCONNECT,
    NO_NODE,
    RECOVERY,
    TRANSMISSION,
    EventLog,
    EventRecord,
    StepStats,
)
from ..params import Params
from ..state import I, S, IndexedEdgeList, IndexedSet, SimState

# Pure-Python pair storage gets expensive quickly; the compiled engine
# raises this to 10^4.
DEFAULT_MAX_N = 3000

_TIMEOUT_CHECK_EVERY = 256


@dataclass
class EventIndex:
    infected: IndexedSet
    si_edges: IndexedEdgeList
    ii_edges: IndexedEdgeList
    ss_nonadjacent_pairs: IndexedEdgeList

    def snapshot(self) -> dict[str, frozenset]:
        """Contents as order-free sets, for coherence checks."""
        return {
            "infected": frozenset(self.infected),
            "si": frozenset(self.si_edges),
            "ii": frozenset(self.ii_edges),
            "ss_pairs": frozenset(self.ss_nonadjacent_pairs),
        }


def expected_snapshot(state: SimState) -> dict[str, frozenset]:
    """From-scratch recomputation of the four collections, as sets."""
    states = state.states
    infected = frozenset(int(v) for v in np.flatnonzero(states == I))
    si = []
    ii = []
    for v1, v2 in state.edges:
        k = int(states[v1]) + int(states[v2])
        if k == 1:
            si.append((v1, v2))
        elif k == 2:
            ii.append((v1, v2))
    n = state.n
    adj = np.zeros((n, n), dtype=bool)
    for v1, v2 in state.edges:
        adj[v1, v2] = adj[v2, v1] = True
    s_mask = states == S
    open_pairs = (s_mask[:, None] & s_mask[None, :]) \
        & np.triu(np.ones((n, n), dtype=bool), k=1) & ~adj
    pu, pv = np.nonzero(open_pairs)
    return {
        "infected": infected,
        "si": frozenset(si),
        "ii": frozenset(ii),
        "ss_pairs": frozenset(zip(pu.tolist(), pv.tolist())),
    }


def rebuild_index(state: SimState) -> EventIndex:
    """Full O(n^2) recomputation; used for initialization and as the
    consistency oracle for the incremental updates."""
    snap = expected_snapshot(state)
    return EventIndex(
        infected=IndexedSet(sorted(snap["infected"])),
        si_edges=IndexedEdgeList(sorted(snap["si"])),
        ii_edges=IndexedEdgeList(sorted(snap["ii"])),
        ss_nonadjacent_pairs=IndexedEdgeList(sorted(snap["ss_pairs"])),
    )


class IndexedEngine:
    def __init__(self, state: SimState, params: Params, seed: int,
                 *, max_n: int = DEFAULT_MAX_N):
        if state.n > max_n:
            raise UsageError(
                f"indexed simulator holds O(n^2) pairs; refusing n > {max_n} "
                f"(got {state.n})")
        self.state = state
        self.params = params
        self.rng = Random(seed)
        self.index = rebuild_index(state)
        self.susceptible = IndexedSet(
            int(v) for v in np.flatnonzero(state.states == S))
        self.adjacency: list[set[int]] = [set() for _ in range(state.n)]
        for v1, v2 in state.edges:
            self.adjacency[v1].add(v2)
            self.adjacency[v2].add(v1)

    # -- local repairs ----------------------------------------------------

    def _infect(self, v: int) -> None:
        idx = self.index
        adj_v = self.adjacency[v]
        self.susceptible.discard(v)
        for x in self.susceptible:
            if x not in adj_v:
                idx.ss_nonadjacent_pairs.remove(v, x)
        idx.infected.add(v)
        self.state.set_node_state(v, I)
        states = self.state.states
        for w in adj_v:
            if states[w] == I:
                idx.si_edges.remove(v, w)
                idx.ii_edges.insert(v, w)
            else:
                idx.si_edges.insert(v, w)

    def _recover(self, v: int) -> None:
        idx = self.index
        adj_v = self.adjacency[v]
        idx.infected.discard(v)
        self.state.set_node_state(v, S)
        states = self.state.states
        for w in adj_v:
            if states[w] == I:
                idx.ii_edges.remove(v, w)
                idx.si_edges.insert(v, w)
            else:
                idx.si_edges.remove(v, w)
        for x in self.susceptible:
            if x not in adj_v:
                idx.ss_nonadjacent_pairs.insert(v, x)
        self.susceptible.add(v)

    def _connect(self, v1: int, v2: int) -> None:
        self.index.ss_nonadjacent_pairs.remove(v1, v2)
        self.state.add_edge(v1, v2)
        self.adjacency[v1].add(v2)
        self.adjacency[v2].add(v1)
        # both endpoints susceptible: no epidemic list changes

    def _disconnect(self, v1: int, v2: int) -> None:
        self.index.ii_edges.remove(v1, v2)
        self.state.remove_edge(v1, v2)
        self.adjacency[v1].discard(v2)
        self.adjacency[v2].discard(v1)

    # ---------------------------------------------------------------------

    def step(self):
        """Apply the next event, or clamp to the horizon and stop."""
        state = self.state
        params = self.params
        horizon = params.horizon
        if state.t >= horizon:
            return None
        idx = self.index
        r_rec = params.alpha * len(idx.infected)
        r_trans = params.beta * len(idx.si_edges)
        r_disc = params.b * len(idx.ii_edges)
        r_conn = params.a * len(idx.ss_nonadjacent_pairs)
        total = r_rec + r_trans + r_disc + r_conn
        if total == 0.0:
            state.t = horizon
            return None
        rng = self.rng
        dt = -math.log(1.0 - rng.random()) / total
        t_next = state.t + dt
        if t_next > horizon:
            state.t = horizon
            return None
        state.t = t_next
        pick = rng.random() * total
        if pick < r_rec:
            v = idx.infected.sample(rng)
            self._recover(v)
            return EventRecord(t_next, RECOVERY, v, NO_NODE)
        if pick < r_rec + r_trans:
            v1, v2 = idx.si_edges.sample(rng)
            self._infect(v2 if state.states[v1] == I else v1)
            return EventRecord(t_next, TRANSMISSION, v1, v2)
        if pick < r_rec + r_trans + r_disc:
            v1, v2 = idx.ii_edges.sample(rng)
            self._disconnect(v1, v2)
            return EventRecord(t_next, DISCONNECT, v1, v2)
        v1, v2 = idx.ss_nonadjacent_pairs.sample(rng)
        self._connect(v1, v2)
        return EventRecord(t_next, CONNECT, v1, v2)


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
    step_hook=None,
) -> tuple[EventLog, StepStats]:
    """Simulate to the horizon, mutating ``state`` in place.

    ``step_hook(engine, record)`` runs after every applied event; tests use
    it to audit the collections against ``rebuild_index``.
    """
    engine = IndexedEngine(state, params, seed, max_n=max_n)
    times: list[float] = []
    kinds: list[int] = []
    node_a: list[int] = []
    node_b: list[int] = []
    stats = StepStats()
    complete = state.n * (state.n - 1) // 2
    start = time.process_time_ns()
    while state.t < params.horizon:
        rec = engine.step()
        if rec is None:
            break
        stats.accepted += 1
        if record_events:
            times.append(rec.t)
            kinds.append(rec.kind)
            node_a.append(rec.a)
            node_b.append(rec.b)
        if recorder is not None:
            recorder(rec.t, rec.kind, rec.nodes())
        if step_hook is not None:
            step_hook(engine, rec)
        if max_steps is not None and stats.accepted >= max_steps:
            break
        if early_exit and state.infected_count == 0 \
                and state.edge_count == complete:
            state.t = params.horizon
            break
        if timeout is not None and stats.accepted % _TIMEOUT_CHECK_EVERY == 0:
            if (time.process_time_ns() - start) / 1e9 > timeout:
                stats.timed_out = True
                break
    stats.wall_ns = time.process_time_ns() - start
    return EventLog(times, kinds, node_a, node_b), stats
