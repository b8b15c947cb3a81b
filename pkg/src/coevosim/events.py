"""Event records, event logs and per-run statistics.

Accepted events carry a timestamp, a kind code and the involved node(s).
Kind codes are small integers so logs can be stored as numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

RECOVERY = 0
TRANSMISSION = 1
DISCONNECT = 2
CONNECT = 3

KIND_NAMES = ("recovery", "transmission", "disconnect", "connect")
KIND_CODES = {name: code for code, name in enumerate(KIND_NAMES)}

# Net effect of each kind on (infected_count, edge_count).
INFECTED_DELTA = np.array([-1, 1, 0, 0], dtype=np.int64)
EDGE_DELTA = np.array([0, 0, -1, 1], dtype=np.int64)

NO_NODE = -1  # placeholder for the second node of single-node events


@dataclass(frozen=True)
class EventRecord:
    """One accepted event: time, kind code, involved node(s)."""

    t: float
    kind: int
    a: int
    b: int = NO_NODE

    @property
    def kind_name(self) -> str:
        return KIND_NAMES[self.kind]

    def nodes(self) -> tuple[int, ...]:
        return (self.a,) if self.b == NO_NODE else (self.a, self.b)


@dataclass
class StepStats:
    """Loop accounting for one run.

    ``accepted + rejected`` equals the number of completed loop iterations;
    the final iteration that only clamps the clock to the horizon is not
    counted. ``wall_ns`` covers the stepping loop only (process CPU time),
    excluding setup and output. ``timed_out`` is set when a deadline cut the
    run short of the horizon.
    """

    accepted: int = 0
    rejected: int = 0
    wall_ns: int = 0
    timed_out: bool = False


class EventLog:
    """Columnar sequence of accepted events (times strictly increasing)."""

    __slots__ = ("times", "kinds", "node_a", "node_b")

    def __init__(self, times, kinds, node_a, node_b):
        self.times = np.asarray(times, dtype=np.float64)
        self.kinds = np.asarray(kinds, dtype=np.int8)
        self.node_a = np.asarray(node_a, dtype=np.int32)
        self.node_b = np.asarray(node_b, dtype=np.int32)

    @classmethod
    def empty(cls) -> "EventLog":
        return cls([], [], [], [])

    @classmethod
    def from_records(cls, records) -> "EventLog":
        recs = list(records)
        return cls(
            [r.t for r in recs],
            [r.kind for r in recs],
            [r.a for r in recs],
            [r.b for r in recs],
        )

    def __len__(self) -> int:
        return len(self.times)

    def __getitem__(self, i: int) -> EventRecord:
        return EventRecord(
            float(self.times[i]), int(self.kinds[i]),
            int(self.node_a[i]), int(self.node_b[i]),
        )

    def __iter__(self) -> Iterator[EventRecord]:
        for i in range(len(self)):
            yield self[i]

    def replay(self, recorder) -> None:
        """Feed every event to ``recorder(t, kind, nodes)`` in order."""
        for rec in self:
            recorder(rec.t, rec.kind, rec.nodes())


# Recorder contract: a callable ``recorder(t, kind, nodes)`` invoked once per
# accepted event, from the single thread running that simulation. It must not
# mutate the simulation state.
Recorder = Optional[object]
