"""Rejection-based simulation with constant-time event selection.

Instead of tracking the exact reaction rates, each event class is
over-approximated by a bound that only depends on cheap counters:

  * node events (recovery):      r_v = alpha * n       (as if all infected)
  * edge events (transmission
    or dissociation):            r_e = max(b, beta) * |E|
  * pair events (association):   r_d = a * n(n-1)/2    (as if all pairs open)

A candidate event is drawn from the bounds in O(1) and then accepted or
rejected so that accepted events follow the exact process law. Rejected
iterations still advance the clock. The number of rejections per accepted
event grows when the true rates are far below the bounds (few infected
nodes, nearly complete graph), but each iteration stays O(1).

By default one exponential holding time is drawn at the summed bound rate
and the class is chosen categorically, which is distributionally identical
to drawing one exponential per class and taking the minimum; the latter is
available as ``three_exp=True`` for differential testing.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from random import Random

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
from ..state import I, S, SimState, canonical_edge

_TIMEOUT_CHECK_EVERY = 4096


class _Sentinel:
    __slots__ = ("_name",)

    def __init__(self, name):
        self._name = name

    def __repr__(self):
        return self._name


REJECTED = _Sentinel("REJECTED")
HORIZON_REACHED = _Sentinel("HORIZON_REACHED")


@dataclass(frozen=True)
class RateBounds:
    """Per-class upper bounds on the total event rates."""

    r_v: float
    r_e: float
    r_d: float

    @property
    def total(self) -> float:
        return self.r_v + self.r_e + self.r_d


def compute_rate_bounds(state: SimState, params: Params) -> RateBounds:
    n = state.n
    return RateBounds(
        r_v=params.alpha * n,
        r_e=max(params.b, params.beta) * state.edge_count,
        r_d=params.a * n * (n - 1) / 2.0,
    )


def true_class_rates(state: SimState, params: Params) -> tuple[float, float, float, float]:
    """Exact (recovery, transmission, disconnect, connect) total rates.

    O(n + |E|); used by tests and debug assertions, never by the engine.
    """
    states = state.states
    si = ii = ss_adj = 0
    for v1, v2 in state.edges:
        k = int(states[v1]) + int(states[v2])
        if k == 2:
            ii += 1
        elif k == 1:
            si += 1
        else:
            ss_adj += 1
    s_count = state.n - state.infected_count
    ss_nonadj = s_count * (s_count - 1) // 2 - ss_adj
    return (
        params.alpha * state.infected_count,
        params.beta * si,
        params.b * ii,
        params.a * ss_nonadj,
    )


class RejectionEngine:
    """Stepper owning the RNG and the per-run constants."""

    def __init__(
        self,
        state: SimState,
        params: Params,
        seed: int,
        *,
        three_exp: bool = False,
        debug_bounds: bool = False,
    ):
        self.state = state
        self.params = params
        self.rng = Random(seed)
        self.three_exp = three_exp
        self.debug_bounds = debug_bounds
        n = state.n
        self._r_v = params.alpha * n
        self._r_d = params.a * n * (n - 1) / 2.0
        self._e_unit = max(params.b, params.beta)
        if self._e_unit > 0:
            self._p_disconnect = params.b / self._e_unit
            self._p_transmit = params.beta / self._e_unit
        else:
            self._p_disconnect = self._p_transmit = 0.0

    def _check_dominance(self, bounds_e: float) -> None:
        rec, trans, disc, conn = true_class_rates(self.state, self.params)
        eps = 1e-9
        assert self._r_v + eps >= rec
        assert bounds_e + eps >= trans + disc
        assert self._r_d + eps >= conn

    def step(self):
        """One loop iteration.

        Returns an ``EventRecord`` when a candidate is accepted, ``REJECTED``
        when it is discarded (the clock still advanced), or
        ``HORIZON_REACHED`` when the next event would land past the horizon
        (the clock is clamped to it and nothing is applied).
        """
        state = self.state
        horizon = self.params.horizon
        if state.t >= horizon:
            return HORIZON_REACHED
        rng = self.rng
        r_v = self._r_v
        r_e = self._e_unit * state.edge_count
        r_d = self._r_d
        if self.debug_bounds:
            self._check_dominance(r_e)
        total = r_v + r_e + r_d
        if total == 0.0:
            state.t = horizon
            return HORIZON_REACHED

        if self.three_exp:
            t_v = -math.log(1.0 - rng.random()) / r_v if r_v > 0 else math.inf
            t_e = -math.log(1.0 - rng.random()) / r_e if r_e > 0 else math.inf
            t_d = -math.log(1.0 - rng.random()) / r_d if r_d > 0 else math.inf
            dt = min(t_v, t_e, t_d)
            klass = 0 if dt == t_v else (1 if dt == t_e else 2)
        else:
            dt = -math.log(1.0 - rng.random()) / total
            pick = rng.random() * total
            klass = 0 if pick < r_v else (1 if pick < r_v + r_e else 2)

        t_next = state.t + dt
        if t_next > horizon:
            state.t = horizon
            return HORIZON_REACHED
        state.t = t_next

        if klass == 0:
            v = rng.randrange(state.n)
            if state.states[v] == I:
                state.set_node_state(v, S)
                return EventRecord(t_next, RECOVERY, v, NO_NODE)
            return REJECTED

        if klass == 1:
            v1, v2 = state.edges.edge_at(rng.randrange(state.edge_count))
            s1 = state.states[v1]
            s2 = state.states[v2]
            if s1 == I and s2 == I:
                if rng.random() < self._p_disconnect:
                    state.remove_edge(v1, v2)
                    return EventRecord(t_next, DISCONNECT, v1, v2)
            elif s1 == I or s2 == I:
                if rng.random() < self._p_transmit:
                    state.set_node_state(v2 if s1 == I else v1, I)
                    return EventRecord(t_next, TRANSMISSION, v1, v2)
            return REJECTED

        v1 = rng.randrange(state.n)
        v2 = rng.randrange(state.n)
        while v2 == v1:
            v2 = rng.randrange(state.n)
        v1, v2 = canonical_edge(v1, v2)
        if state.states[v1] == S and state.states[v2] == S \
                and not state.edges.contains(v1, v2):
            state.add_edge(v1, v2)
            return EventRecord(t_next, CONNECT, v1, v2)
        return REJECTED


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
    three_exp: bool = False,
    debug_bounds: bool = False,
) -> tuple[EventLog, StepStats]:
    """Simulate to the horizon, mutating ``state`` in place.

    ``max_steps`` caps the number of accepted events; ``timeout`` (seconds
    of process CPU time) aborts long runs, flagged in the stats. With
    ``early_exit`` the run stops once no event can ever change the state
    again (no infected nodes and a complete graph).
    """
    engine = RejectionEngine(state, params, seed,
                             three_exp=three_exp, debug_bounds=debug_bounds)
    times: list[float] = []
    kinds: list[int] = []
    node_a: list[int] = []
    node_b: list[int] = []
    stats = StepStats()
    complete = state.n * (state.n - 1) // 2
    iters = 0
    start = time.process_time_ns()
    while state.t < params.horizon:
        outcome = engine.step()
        if outcome is HORIZON_REACHED:
            break
        if outcome is REJECTED:
            stats.rejected += 1
        else:
            stats.accepted += 1
            if record_events:
                times.append(outcome.t)
                kinds.append(outcome.kind)
                node_a.append(outcome.a)
                node_b.append(outcome.b)
            if recorder is not None:
                recorder(outcome.t, outcome.kind, outcome.nodes())
            if max_steps is not None and stats.accepted >= max_steps:
                break
            if early_exit and state.infected_count == 0 \
                    and state.edge_count == complete:
                state.t = params.horizon
                break
        iters += 1
        if timeout is not None and iters % _TIMEOUT_CHECK_EVERY == 0:
            if (time.process_time_ns() - start) / 1e9 > timeout:
                stats.timed_out = True
                break
    stats.wall_ns = time.process_time_ns() - start
    return EventLog(times, kinds, node_a, node_b), stats
