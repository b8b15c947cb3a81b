"""Bounded-rate candidate sampling with thinning."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sps

from conftest import (FROZEN10_COUNTS, brute_counts, complete_state,
                      frozen_state10)
from coevosim.engines import rejection
from coevosim.engines.rejection import (HORIZON_REACHED, REJECTED,
                                        RejectionEngine, compute_rate_bounds,
                                        true_class_rates)
from coevosim.events import (CONNECT, DISCONNECT, RECOVERY, TRANSMISSION,
                             EventRecord)
from coevosim.params import Params
from coevosim.state import I, SimState


def test_frozen_state_counts_agree():
    assert brute_counts(frozen_state10()) == FROZEN10_COUNTS


def test_bounds_formula():
    state = frozen_state10()
    params = Params(alpha=1.5, beta=0.7, a=0.3, b=2.0, horizon=5.0)
    bounds = compute_rate_bounds(state, params)
    assert bounds.r_v == pytest.approx(1.5 * 10)
    assert bounds.r_e == pytest.approx(2.0 * 12)       # max(b, beta) * |E|
    assert bounds.r_d == pytest.approx(0.3 * 45)
    assert bounds.total == pytest.approx(15 + 24 + 13.5)


def test_true_rates_from_brute_counts():
    state = frozen_state10()
    params = Params(alpha=1.5, beta=0.7, a=0.3, b=2.0, horizon=5.0)
    n_inf, n_si, n_ii, n_ss = brute_counts(state)
    rec, trans, disc, conn = true_class_rates(state, params)
    assert rec == pytest.approx(params.alpha * n_inf)
    assert trans == pytest.approx(params.beta * n_si)
    assert disc == pytest.approx(params.b * n_ii)
    assert conn == pytest.approx(params.a * n_ss)


@given(st.integers(2, 12), st.integers(0, 40),
       st.floats(0, 3), st.floats(0, 3), st.floats(0, 3), st.floats(0, 3))
@settings(max_examples=80, deadline=None)
def test_dominance_on_random_states(n, extra, alpha, beta, a, b):
    rng = np.random.default_rng(n * 100 + extra)
    state = SimState(n)
    for _ in range(extra):
        v1, v2 = map(int, rng.choice(n, 2, replace=False))
        state.add_edge(v1, v2)
    for v in range(n):
        if rng.random() < 0.4:
            state.set_node_state(v, I)
    params = Params(alpha=alpha, beta=beta, a=a, b=b, horizon=1.0)
    bounds = compute_rate_bounds(state, params)
    rec, trans, disc, conn = true_class_rates(state, params)
    eps = 1e-12
    assert rec <= bounds.r_v + eps
    assert trans + disc <= bounds.r_e + eps
    assert conn <= bounds.r_d + eps


def run_first_steps(state_builder, params, trials, seed0, three_exp=False):
    """First accepted event per fresh engine: (holding time, kind) pairs."""
    times = np.empty(trials)
    kinds = np.empty(trials, dtype=int)
    for i in range(trials):
        eng = RejectionEngine(state_builder(), params, seed0 + i,
                              three_exp=three_exp)
        while True:
            out = eng.step()
            if isinstance(out, EventRecord):
                times[i] = out.t
                kinds[i] = out.kind
                break
            assert out is REJECTED or out is HORIZON_REACHED
            if out is HORIZON_REACHED:
                raise AssertionError("horizon too short for the test")
    return times, kinds


THINNING_PARAMS = Params(alpha=1.5, beta=0.7, a=0.3, b=2.0, horizon=100.0)


def thinning_checks(times, kinds, params=THINNING_PARAMS):
    state = frozen_state10()
    class_rates = true_class_rates(state, params)
    r_true = sum(class_rates)
    ks = sps.kstest(times, sps.expon(scale=1.0 / r_true).cdf)
    observed = np.bincount(kinds, minlength=4)
    expected = np.array(class_rates) / r_true * len(kinds)
    chi2 = sps.chisquare(observed, expected)
    return ks.pvalue, chi2.pvalue


def test_first_accepted_event_follows_true_law():
    times, kinds = run_first_steps(frozen_state10, THINNING_PARAMS,
                                   trials=20_000, seed0=1000)
    ks_p, chi2_p = thinning_checks(times, kinds)
    assert ks_p > 1e-3
    assert chi2_p > 1e-3


def test_three_exp_mode_same_law():
    times, kinds = run_first_steps(frozen_state10, THINNING_PARAMS,
                                   trials=20_000, seed0=5000, three_exp=True)
    ks_p, chi2_p = thinning_checks(times, kinds)
    assert ks_p > 1e-3
    assert chi2_p > 1e-3


def test_zero_rate_classes_never_fire():
    params = Params(alpha=1.0, beta=0.0, a=0.0, b=0.0, horizon=50.0)
    times, kinds = run_first_steps(frozen_state10, params,
                                   trials=500, seed0=77)
    assert set(kinds) == {RECOVERY}


def test_all_zero_rates_jump_to_horizon():
    state = frozen_state10()
    params = Params(alpha=0.0, beta=0.0, a=0.0, b=0.0, horizon=3.0)
    log, stats = rejection.run(state, params, seed=1)
    assert len(log) == 0
    assert stats.accepted == 0
    assert state.t == 3.0


def test_horizon_clamp_never_overshoots():
    state = frozen_state10()
    params = Params(alpha=1.0, beta=0.5, a=0.1, b=1.0, horizon=0.75)
    log, stats = rejection.run(state, params, seed=3)
    assert state.t == 0.75
    assert all(t <= 0.75 for t in log.times)


def test_run_is_deterministic():
    params = Params(alpha=1.0, beta=0.5, a=0.1, b=1.0, horizon=2.0)
    out = []
    for _ in range(2):
        state = frozen_state10()
        log, stats = rejection.run(state, params, seed=42)
        out.append((log.times.tolist(), log.kinds.tolist(),
                    log.node_a.tolist(), log.node_b.tolist(),
                    stats.accepted, stats.rejected))
    assert out[0] == out[1]


def test_counts_line_up_with_log():
    state = frozen_state10()
    params = Params(alpha=1.0, beta=0.5, a=0.1, b=1.0, horizon=2.0)
    log, stats = rejection.run(state, params, seed=9)
    assert stats.accepted == len(log)
    assert stats.rejected >= 0


def test_max_steps_caps_accepted_events():
    state = frozen_state10()
    params = Params(alpha=1.0, beta=0.5, a=0.1, b=1.0, horizon=100.0)
    log, stats = rejection.run(state, params, seed=4, max_steps=5)
    assert stats.accepted == 5
    assert len(log) == 5


def test_events_are_consistent_with_state_rules():
    # every accepted event must have been legal at its moment
    state = frozen_state10()
    reference = frozen_state10()
    params = Params(alpha=1.0, beta=1.0, a=0.5, b=1.0, horizon=2.0)

    def check(t, kind, nodes):
        if kind == RECOVERY:
            (v,) = nodes
            assert reference.states[v] == I
            reference.set_node_state(v, 0)
        elif kind == TRANSMISSION:
            v1, v2 = nodes
            assert reference.edges.contains(v1, v2)
            assert {int(reference.states[v1]), int(reference.states[v2])} == {0, 1}
            target = v1 if reference.states[v1] == 0 else v2
            reference.set_node_state(target, I)
        elif kind == DISCONNECT:
            v1, v2 = nodes
            assert reference.edges.contains(v1, v2)
            assert reference.states[v1] == I and reference.states[v2] == I
            reference.remove_edge(v1, v2)
        else:
            assert kind == CONNECT
            v1, v2 = nodes
            assert not reference.edges.contains(v1, v2)
            assert reference.states[v1] == 0 and reference.states[v2] == 0
            reference.add_edge(v1, v2)

    log, _ = rejection.run(state, params, seed=12, recorder=check)
    assert reference.infected_count == state.infected_count
    assert sorted(reference.edges) == sorted(state.edges)


def test_recovery_decay_matches_analytic_mean():
    # beta=a=b=0 from one infected: survival probability exp(-alpha t)
    alpha, t, reps = 1.3, 0.8, 4000
    survived = 0
    for i in range(reps):
        state = SimState(2)
        state.set_node_state(0, I)
        params = Params(alpha=alpha, beta=0.0, a=0.0, b=0.0, horizon=t)
        rejection.run(state, params, seed=i)
        survived += state.infected_count
    p = math.exp(-alpha * t)
    se = math.sqrt(p * (1 - p) / reps)
    assert abs(survived / reps - p) < 4 * se


def test_early_exit_on_extinct_complete_graph():
    # all susceptible and already complete: nothing can ever happen again
    state = complete_state(4, infected=[0])
    params = Params(alpha=10.0, beta=0.0, a=1.0, b=0.0, horizon=1e6)
    log, stats = rejection.run(state, params, seed=2, early_exit=True)
    assert state.infected_count == 0
    assert state.t == params.horizon
