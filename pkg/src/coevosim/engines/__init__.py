"""Simulation engines and the algorithm/backend dispatch."""

from __future__ import annotations

from typing import Callable

from ..errors import UsageError
from ..events import EventLog, StepStats
from ..params import Params
from ..state import SimState
from . import indexed, naive, rejection
from .backend import BACKENDS, HAVE_COMPILED, default_backend, resolve_backend

ALGORITHMS = ("icon", "fast", "naive")


def simulate(
    state: SimState,
    params: Params,
    seed: int,
    *,
    algorithm: str = "icon",
    backend: str | None = None,
    recorder: Callable | None = None,
    record_events: bool = True,
    max_steps: int | None = None,
    timeout: float | None = None,
    early_exit: bool = False,
) -> tuple[EventLog, StepStats]:
    """Run one replica with the chosen algorithm, mutating ``state``.

    ``backend`` of None picks the compiled kernels when built. The
    algorithm ids match the command line: ``icon`` is the rejection
    sampler, ``fast`` the indexed event-driven baseline, ``naive`` the
    full-enumeration baseline.
    """
    if algorithm not in ALGORITHMS:
        raise UsageError(
            f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}"
        )
    chosen = resolve_backend(backend)
    if chosen == "compiled":
        from . import compiled

        return compiled.run(
            state,
            params,
            seed,
            algorithm=algorithm,
            recorder=recorder,
            record_events=record_events,
            max_steps=max_steps,
            timeout=timeout,
            early_exit=early_exit,
        )
    module = {"icon": rejection, "fast": indexed, "naive": naive}[algorithm]
    return module.run(
        state,
        params,
        seed,
        recorder=recorder,
        record_events=record_events,
        max_steps=max_steps,
        timeout=timeout,
        early_exit=early_exit,
    )
