"""Shared fixtures and brute-force reference helpers.

The reference functions here recount everything from scratch with plain
loops so engine bookkeeping is checked against an implementation that
cannot share its bugs.
"""

from __future__ import annotations

import pytest

from coevosim.state import I, S, SimState


def complete_state(n: int, infected=()) -> SimState:
    state = SimState(n)
    for v1 in range(n):
        for v2 in range(v1 + 1, n):
            state.add_edge(v1, v2)
    for v in infected:
        state.set_node_state(v, I)
    return state


def brute_counts(state: SimState) -> tuple[int, int, int, int]:
    """(infected, SI edges, II edges, susceptible non-adjacent pairs)."""
    n = state.n
    adj = {(v1, v2) for v1, v2 in state.edges}
    n_inf = sum(1 for v in range(n) if state.states[v] == I)
    n_si = n_ii = 0
    for v1, v2 in adj:
        a_inf = state.states[v1] == I
        b_inf = state.states[v2] == I
        if a_inf and b_inf:
            n_ii += 1
        elif a_inf or b_inf:
            n_si += 1
    n_ss = sum(
        1
        for v1 in range(n)
        for v2 in range(v1 + 1, n)
        if state.states[v1] == S and state.states[v2] == S
        and (v1, v2) not in adj
    )
    return n_inf, n_si, n_ii, n_ss


# Fixed ten-node state used by the thinning tests: a ring plus two chords,
# nodes 0-3 infected. Counts below are by hand from the picture.
FROZEN10_EDGES = [
    (0, 1), (1, 2), (2, 3), (3, 4), (4, 5),
    (5, 6), (6, 7), (7, 8), (8, 9), (0, 9),
    (0, 5), (2, 7),
]
FROZEN10_INFECTED = (0, 1, 2, 3)
# II: (0,1) (1,2) (2,3); SI: (3,4) (0,9) (0,5) (2,7); rest of the ring is SS.
FROZEN10_COUNTS = (4, 4, 3, 10)


def frozen_state10() -> SimState:
    state = SimState(10)
    for v1, v2 in FROZEN10_EDGES:
        state.add_edge(v1, v2)
    for v in FROZEN10_INFECTED:
        state.set_node_state(v, I)
    return state


@pytest.fixture
def k3():
    return complete_state(3, infected=[0])
