"""Python shim around the C++ kernels.

Converts a SimState to flat arrays, invokes the kernel and writes the
final configuration back, so compiled and pure runs are interchangeable.
The kernels use their own generator, so only distributions match across
backends, not event-by-event streams. A recorder is replayed from the
event log after the run; the recorder contract (pure function of the
event) makes that equivalent to in-loop delivery.
"""

from __future__ import annotations

import numpy as np

from ..errors import UsageError
from ..events import CONNECT, DISCONNECT, NO_NODE, RECOVERY, TRANSMISSION
from ..events import EventLog, StepStats
from ..params import Params
from ..state import I, IndexedEdgeList, SimState
from . import _kernels
from . import naive as _naive

for _name, _code in (("RECOVERY", RECOVERY), ("TRANSMISSION", TRANSMISSION),
                     ("DISCONNECT", DISCONNECT), ("CONNECT", CONNECT),
                     ("NO_NODE", NO_NODE)):
    if getattr(_kernels, _name) != _code:
        raise ImportError(f"kernel constant {_name} disagrees with events.py")

# The compiled pair store is a flat position array plus two endpoint
# lists, about 24 bytes per potential pair at the limit below.
FAST_MAX_N = 10_000

_KERNELS = {
    "icon": _kernels.icon_run,
    "fast": _kernels.fast_run,
    "naive": _kernels.naive_run,
}


def run(
    state: SimState,
    params: Params,
    seed: int,
    *,
    algorithm: str = "icon",
    recorder=None,
    record_events: bool = True,
    max_steps: int | None = None,
    timeout: float | None = None,
    early_exit: bool = False,
) -> tuple[EventLog, StepStats]:
    """Run one replica on the compiled backend, mutating ``state``."""
    if algorithm == "fast" and state.n > FAST_MAX_N:
        raise UsageError(
            f"indexed simulator holds O(n^2) pairs; refusing n > {FAST_MAX_N} "
            f"(got {state.n})")
    if algorithm == "naive" and state.n > _naive.DEFAULT_MAX_N:
        raise UsageError(
            f"naive simulator capped at n <= {_naive.DEFAULT_MAX_N} "
            f"(got {state.n})")
    kernel = _KERNELS[algorithm]
    states0 = np.ascontiguousarray(state.states, dtype=np.int8)
    edges0 = np.ascontiguousarray(state.edges.to_array(), dtype=np.int32)
    want_events = record_events or recorder is not None
    (times, kinds, node_a, node_b, accepted, rejected, wall_ns, timed_out,
     final_states, final_edges, final_t) = kernel(
        states0, edges0,
        params.alpha, params.beta, params.a, params.b,
        state.t, params.horizon,
        seed & 0xFFFFFFFFFFFFFFFF,
        -1 if max_steps is None else int(max_steps),
        -1.0 if timeout is None else float(timeout),
        bool(early_exit), bool(want_events),
    )
    state.states[:] = final_states
    state.infected_count = int(np.count_nonzero(final_states == I))
    state.edges = IndexedEdgeList(final_edges.tolist())
    state.t = float(final_t)
    log = EventLog(times, kinds, node_a, node_b)
    if recorder is not None:
        log.replay(recorder)
    if not record_events:
        log = EventLog.empty()
    stats = StepStats(accepted=int(accepted), rejected=int(rejected),
                      wall_ns=int(wall_ns), timed_out=bool(timed_out))
    return log, stats
