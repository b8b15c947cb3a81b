"""Stochastic SIS dynamics on coevolving contact networks.

Infection spreads over a graph whose edges are themselves rewired by
the dynamics: infected nodes recover, infection crosses existing
edges, edges between infected pairs break, and absent edges between
susceptible pairs form. The package provides an exact rejection
sampler for this chain, two reference simulators, a tiny-system
matrix-exponential oracle, and a CLI.
"""

from __future__ import annotations

from .engines import ALGORITHMS, simulate
from .engines.backend import BACKENDS, HAVE_COMPILED, default_backend
from .errors import IntegrityError, UsageError
from .events import EventLog, EventRecord, StepStats
from .generators import GraphSpec, build_graph, init_infected
from .params import Params, resolve_params
from .state import SimState

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BACKENDS",
    "EventLog",
    "EventRecord",
    "GraphSpec",
    "HAVE_COMPILED",
    "IntegrityError",
    "Params",
    "SimState",
    "StepStats",
    "UsageError",
    "__version__",
    "build_graph",
    "default_backend",
    "init_infected",
    "resolve_params",
    "simulate",
]
