"""Exact transient analysis of the full chain on tiny instances.

A full configuration packs n node-state bits with n(n-1)/2 edge bits into
one integer, giving 2^(n + n(n-1)/2) states; n is capped at 5 (32768
states). The generator matrix enumerates the four reaction rules per
state, and transient distributions come from uniformization: Poisson
weighted powers of the uniformized kernel, truncated once the neglected
tail mass drops below a tolerance. This is the ground truth the
simulators are checked against.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.stats import poisson

from .errors import UsageError
from .params import Params
from .state import SimState

MAX_NODES = 5


def pair_index(v1: int, v2: int, n: int) -> int:
    """Position of pair (v1, v2), v1 < v2, in the upper-triangle order."""
    return v1 * (2 * n - v1 - 1) // 2 + (v2 - v1 - 1)


def pair_list(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def encode(n: int, infected, edges) -> int:
    """Pack a configuration (infected node set, edge set) into an index."""
    bits = 0
    for v in infected:
        bits |= 1 << v
    for v1, v2 in edges:
        if v1 > v2:
            v1, v2 = v2, v1
        bits |= 1 << (n + pair_index(v1, v2, n))
    return bits

def encode_state(state: SimState) -> int:
    return encode(state.n, state.infected_nodes(), state.edges)


def build_generator(n: int, params: Params) -> sp.csr_matrix:
    """Rate matrix over all configurations of n nodes.

    Off-diagonal entries are alpha (recovery), beta (transmission),
    b (edge removal) or a (edge creation); rows sum to zero.
    """
    if not 2 <= n <= MAX_NODES:
        raise UsageError(f"oracle supports 2 <= n <= {MAX_NODES}")
    pairs = pair_list(n)
    n_states = 1 << (n + len(pairs))
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []

    def add(src: int, dst: int, rate: float) -> None:
        if rate > 0:
            rows.append(src)
            cols.append(dst)
            vals.append(rate)

    for s in range(n_states):
        for v in range(n):
            if s >> v & 1:
                add(s, s ^ (1 << v), params.alpha)  # recovery
        for k, (v1, v2) in enumerate(pairs):
            edge_bit = 1 << (n + k)
            i1 = s >> v1 & 1
            i2 = s >> v2 & 1
            if s & edge_bit:
                if i1 and i2:
                    add(s, s ^ edge_bit, params.b)  # dissociation
                elif i1 != i2:
                    target = v2 if i1 else v1
                    add(s, s | (1 << target), params.beta)  # transmission
            elif not i1 and not i2:
                add(s, s | edge_bit, params.a)  # association
    q = sp.coo_matrix((vals, (rows, cols)), shape=(n_states, n_states)).tocsr()
    q = q - sp.diags(np.asarray(q.sum(axis=1)).ravel())
    return q.tocsr()


def point_distribution(n: int, infected, edges) -> np.ndarray:
    n_states = 1 << (n + n * (n - 1) // 2)
    p0 = np.zeros(n_states)
    p0[encode(n, infected, edges)] = 1.0
    return p0


def transient_distribution(
    q: sp.csr_matrix, p0: np.ndarray, t: float, tol: float = 1e-12
) -> np.ndarray:
    """p(t) = p(0) exp(Qt) by uniformization with tail mass below ``tol``."""
    if t < 0:
        raise UsageError("t must be >= 0")
    p0 = np.asarray(p0, dtype=np.float64)
    rate = float(-q.diagonal().min())
    mu = rate * t
    if mu == 0.0:
        return p0.copy()
    kernel = (sp.eye(q.shape[0], format="csr") + q / rate).tocsr()
    k_max = int(poisson.isf(tol, mu)) + 2
    weights = poisson.pmf(np.arange(k_max + 1), mu)
    out = weights[0] * p0
    v = p0
    for k in range(1, k_max + 1):
        v = v @ kernel
        out = out + weights[k] * v
    return out


def expectations(dist: np.ndarray, n: int) -> tuple[float, float]:
    """Expected (prevalence, edge count) under a configuration distribution."""
    n_pairs = n * (n - 1) // 2
    idx = np.arange(dist.size, dtype=np.int64)
    node_bits = np.zeros(dist.size, dtype=np.int64)
    for v in range(n):
        node_bits += idx >> v & 1
    edge_bits = np.zeros(dist.size, dtype=np.int64)
    for k in range(n_pairs):
        edge_bits += idx >> (n + k) & 1
    return (
        float(np.dot(dist, node_bits)) / n,
        float(np.dot(dist, edge_bits)),
    )


def transient_expectations(
    q: sp.csr_matrix, p0: np.ndarray, t: float, n: int, tol: float = 1e-12
) -> tuple[float, float, np.ndarray]:
    """Expected prevalence and edge count at time t, plus the distribution."""
    dist = transient_distribution(q, p0, t, tol=tol)
    prev, edges = expectations(dist, n)
    return prev, edges, dist
