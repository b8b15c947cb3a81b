"""Seed derivation. One master seed deterministically fans out into
independent streams for graph generation, infection placement and each
replica's dynamics.
"""

from __future__ import annotations

import numpy as np

# Stream tags keep the derived streams for different purposes disjoint.
GRAPH_STREAM = 0x67
INIT_STREAM = 0x69
SIM_STREAM = 0x73


def replica_seed(master: int, replica: int) -> int:
    """Per-replica base seed (master + replica id)."""
    return master + replica


def derive_seed(master: int, *tags: int) -> int:
    """64-bit seed for the stream identified by ``tags``."""
    ss = np.random.SeedSequence((master, *tags))
    return int(ss.generate_state(1, np.uint64)[0])


def derive_generator(master: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((master, *tags)))
