"""Dynamical state: node states plus an edge structure with O(1) operations.

``IndexedEdgeList`` keeps a dense list of canonical edges next to a
position index, so insert, remove, membership, size and uniform sampling
are all amortized constant time (remove compacts by swapping the last
element into the gap). ``SimState`` bundles node states, the edge list,
a cached infected count and the model clock.
"""

from __future__ import annotations

import os
from typing import Iterator, Optional

import numpy as np

from .errors import UsageError

S = 0
I = 1
STATE_NAMES = {S: "S", I: "I"}
STATE_CODES = {"S": S, "I": I}

# When set, every mutation re-counts the infected nodes. Only for tests.
DEBUG_CHECKS = bool(os.environ.get("COEVOSIM_DEBUG"))


class IndexedSet:
    """Set of hashable items supporting O(1) uniform sampling.

    Dense storage list plus item -> position map; removal swaps the last
    item into the vacated slot.
    """

    __slots__ = ("items", "positions")

    def __init__(self, items=()):
        self.items: list = []
        self.positions: dict = {}
        for item in items:
            self.add(item)

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, item) -> bool:
        return item in self.positions

    def __iter__(self) -> Iterator:
        return iter(self.items)

    def add(self, item) -> bool:
        if item in self.positions:
            return False
        self.positions[item] = len(self.items)
        self.items.append(item)
        return True

    def discard(self, item) -> bool:
        pos = self.positions.pop(item, None)
        if pos is None:
            return False
        last = self.items.pop()
        if pos < len(self.items):
            self.items[pos] = last
            self.positions[last] = pos
        return True

    def sample(self, rng):
        """Uniform member; empty set is a ValueError (caller must guard)."""
        return self.items[rng.randrange(len(self.items))]


def canonical_edge(v1: int, v2: int) -> tuple[int, int]:
    """Order an endpoint pair; self-loops are a usage error."""
    if v1 == v2:
        raise UsageError(f"self-loop on node {v1} is not allowed")
    return (v1, v2) if v1 < v2 else (v2, v1)


class IndexedEdgeList:
    """Simple-graph edge multiset with O(1) insert/remove/sample/contains.

    Edges are stored exactly once, in canonical (a, b) order with a < b.
    """

    __slots__ = ("_set",)

    def __init__(self, edges=()):
        self._set = IndexedSet()
        for v1, v2 in edges:
            self.insert(v1, v2)

    def __len__(self) -> int:
        return len(self._set)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self._set)

    def __contains__(self, edge) -> bool:
        return canonical_edge(*edge) in self._set.positions

    def contains(self, v1: int, v2: int) -> bool:
        return canonical_edge(v1, v2) in self._set.positions

    def insert(self, v1: int, v2: int) -> bool:
        """Store the edge; returns False if it was already present."""
        return self._set.add(canonical_edge(v1, v2))

    def remove(self, v1: int, v2: int) -> bool:
        """Drop the edge; returns False if it was absent."""
        return self._set.discard(canonical_edge(v1, v2))

    def sample(self, rng) -> tuple[int, int]:
        """Uniform stored edge; empty list is a ValueError."""
        return self._set.sample(rng)

    def edge_at(self, pos: int) -> tuple[int, int]:
        return self._set.items[pos]

    def to_array(self) -> np.ndarray:
        """Edges as an (m, 2) int32 array, in storage order."""
        if not self._set.items:
            return np.empty((0, 2), dtype=np.int32)
        return np.array(self._set.items, dtype=np.int32)


class SimState:
    """Full dynamical state: node states, edges, cached counts, clock."""

    __slots__ = ("n", "states", "edges", "infected_count", "t")

    def __init__(self, n: int, edges=(), infected=()):
        if n < 1:
            raise UsageError("need at least one node")
        self.n = n
        self.states = np.zeros(n, dtype=np.int8)  # all susceptible
        self.edges = IndexedEdgeList()
        self.infected_count = 0
        self.t = 0.0
        for v1, v2 in edges:
            self.add_edge(v1, v2)
        for v in infected:
            self.set_node_state(v, I)

    def _check_node(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise UsageError(f"node {v} outside [0, {self.n})")

    def set_node_state(self, v: int, s: int) -> bool:
        """Write a node state; returns whether it actually changed."""
        self._check_node(v)
        old = self.states[v]
        if old == s:
            return False
        self.states[v] = s
        self.infected_count += 1 if s == I else -1
        if DEBUG_CHECKS:
            assert self.infected_count == int(np.sum(self.states == I))
        return True

    def add_edge(self, v1: int, v2: int) -> bool:
        self._check_node(v1)
        self._check_node(v2)
        return self.edges.insert(v1, v2)

    def remove_edge(self, v1: int, v2: int) -> bool:
        return self.edges.remove(v1, v2)

    def sample_uniform_edge(self, rng) -> tuple[int, int]:
        return self.edges.sample(rng)

    def advance_to(self, t: float) -> None:
        if t < self.t:
            raise UsageError(f"time cannot decrease ({self.t} -> {t})")
        self.t = t

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def prevalence(self) -> float:
        return self.infected_count / self.n

    @property
    def mean_degree(self) -> float:
        return 2.0 * len(self.edges) / self.n

    def susceptible_count(self) -> int:
        return self.n - self.infected_count

    def infected_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.states == I)

    def copy(self) -> "SimState":
        out = SimState(self.n)
        out.states = self.states.copy()
        out.edges = IndexedEdgeList(self.edges)
        out.infected_count = self.infected_count
        out.t = self.t
        return out

    def __repr__(self) -> str:
        return (f"SimState(n={self.n}, infected={self.infected_count}, "
                f"edges={len(self.edges)}, t={self.t:g})")
