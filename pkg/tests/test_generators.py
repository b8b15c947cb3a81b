"""Graph construction, infection seeding, file round trips."""

from __future__ import annotations

import math

import numpy as np
import pytest

from coevosim.errors import UsageError
from coevosim.generators import (GraphSpec, build_graph, gen_barabasi_albert,
                                 gen_erdos_renyi, gen_geometric,
                                 geometric_radius, init_infected,
                                 read_edge_list, read_states, write_edge_list,
                                 write_states)
from coevosim.state import I, S


def degrees(state) -> np.ndarray:
    d = np.zeros(state.n, dtype=int)
    for v1, v2 in state.edges:
        d[v1] += 1
        d[v2] += 1
    return d


def test_er_extremes():
    rng = np.random.default_rng(0)
    assert gen_erdos_renyi(20, 0.0, rng).edge_count == 0
    assert gen_erdos_renyi(20, 1.0, rng).edge_count == 20 * 19 // 2


def test_er_edge_count_distribution():
    # total edges over many graphs is binomial; z within +-4
    n, p, reps = 60, 0.1, 200
    pairs = n * (n - 1) // 2
    rng = np.random.default_rng(7)
    total = sum(gen_erdos_renyi(n, p, rng).edge_count for _ in range(reps))
    mean = reps * pairs * p
    sd = math.sqrt(reps * pairs * p * (1 - p))
    assert abs(total - mean) < 4 * sd


def test_er_simple_graph():
    state = gen_erdos_renyi(40, 0.2, np.random.default_rng(3))
    seen = set()
    for v1, v2 in state.edges:
        assert 0 <= v1 < v2 < 40
        assert (v1, v2) not in seen
        seen.add((v1, v2))


def test_ba_exact_edge_count_and_min_degree():
    n, m = 200, 5
    state = gen_barabasi_albert(n, m, np.random.default_rng(1))
    assert state.edge_count == m * (m - 1) // 2 + (n - m) * m
    assert degrees(state).min() >= m


def test_ba_needs_room_for_seed():
    with pytest.raises(UsageError):
        gen_barabasi_albert(4, 5, np.random.default_rng(0))


def test_geometric_radius_formula():
    r = geometric_radius(2000, 5.0)
    assert r == pytest.approx(math.sqrt(5.0 / (2000 * math.pi)))
    with pytest.raises(UsageError):
        geometric_radius(100, 0.0)
    with pytest.raises(UsageError):
        geometric_radius(100, 99.0)


def test_ba_tail_heavier_than_er():
    # preferential attachment should beat ER on max degree nearly always
    n, m, pairs = 1000, 5, 100
    p = 2 * (m * (m - 1) // 2 + (n - m) * m) / (n * (n - 1))
    wins = 0
    for seed in range(pairs):
        ba = gen_barabasi_albert(n, m, np.random.default_rng(seed))
        er = gen_erdos_renyi(n, p, np.random.default_rng(10_000 + seed))
        wins += degrees(ba).max() > degrees(er).max()
    assert wins >= 95


def test_geometric_mean_degree_near_target():
    # boundary effects pull the measured value a little under the target
    state = gen_geometric(2000, 5.0, np.random.default_rng(0))
    assert 4.5 < state.mean_degree < 5.2


def test_build_graph_dispatch_and_determinism():
    for spec in (GraphSpec(kind="er", n=50, p=0.1),
                 GraphSpec(kind="ba", n=50, m=3),
                 GraphSpec(kind="geom", n=50, target_mean_degree=4.0)):
        g1 = build_graph(spec, np.random.default_rng(11))
        g2 = build_graph(spec, np.random.default_rng(11))
        assert sorted(g1.edges) == sorted(g2.edges)


def test_graph_spec_validation():
    with pytest.raises(UsageError):
        GraphSpec(kind="tree", n=10)
    with pytest.raises(UsageError):
        GraphSpec(kind="er", n=1)


def test_init_infected_count_rounds():
    for n, frac, expect in ((10, 0.1, 1), (200, 0.1, 20), (3, 0.1, 0),
                            (10, 0.25, 3), (5, 1.0, 5)):
        state = build_graph(GraphSpec(kind="er", n=n, p=0.0),
                            np.random.default_rng(0))
        init_infected(state, frac, np.random.default_rng(5))
        assert state.infected_count == expect, (n, frac)


def test_init_infected_rejects_bad_fraction():
    state = build_graph(GraphSpec(kind="er", n=10, p=0.0),
                        np.random.default_rng(0))
    with pytest.raises(UsageError):
        init_infected(state, 1.5, np.random.default_rng(0))


def test_edge_list_round_trip(tmp_path):
    state = gen_erdos_renyi(30, 0.15, np.random.default_rng(2))
    path = tmp_path / "g.txt"
    write_edge_list(path, state)
    back = read_edge_list(path)
    assert back.n == 30
    assert sorted(back.edges) == sorted(state.edges)


def test_states_round_trip(tmp_path):
    state = gen_erdos_renyi(12, 0.3, np.random.default_rng(4))
    init_infected(state, 0.25, np.random.default_rng(9))
    path = tmp_path / "s.txt"
    write_states(path, state)
    fresh = gen_erdos_renyi(12, 0.0, np.random.default_rng(0))
    read_states(path, fresh)
    assert np.array_equal(fresh.states, state.states)
    assert fresh.infected_count == state.infected_count
