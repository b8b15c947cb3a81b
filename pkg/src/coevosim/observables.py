"""Trajectories on a time grid and the wave metric.

A run's observables (prevalence and mean degree) are piecewise constant
between events; sampling takes the state as of the last event at or before
each grid time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .errors import IntegrityError, UsageError
from .events import EDGE_DELTA, INFECTED_DELTA, EventLog
from .state import SimState

DEFAULT_GRID_POINTS = 500
DEFAULT_WAVE_WINDOW = 11
DEFAULT_WAVE_PROMINENCE = 0.05


@dataclass
class Trajectory:
    grid: np.ndarray
    prevalence: np.ndarray
    mean_degree: np.ndarray
    replica_id: int = 0


def make_grid(horizon: float, points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    if points < 2:
        raise UsageError("grid needs at least 2 points")
    return np.linspace(0.0, horizon, points)


def record_on_grid(
    events: EventLog,
    initial_state: SimState,
    grid: np.ndarray,
    replica_id: int = 0,
) -> Trajectory:
    """Replay an event log over a grid of sample times.

    ``initial_state`` is the state at t=0 (before any event). Grid times
    must be non-decreasing and non-negative.
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size and (np.any(np.diff(grid) < 0) or grid[0] < 0):
        raise UsageError("grid times must be non-decreasing and >= 0")
    times = events.times
    if times.size and np.any(np.diff(times) < 0):
        raise IntegrityError("event log times are out of order")
    n = initial_state.n
    inf0 = initial_state.infected_count
    edges0 = initial_state.edge_count
    inf = np.concatenate(([inf0], inf0 + np.cumsum(INFECTED_DELTA[events.kinds])))
    edg = np.concatenate(([edges0], edges0 + np.cumsum(EDGE_DELTA[events.kinds])))
    if np.any(inf < 0) or np.any(edg < 0):
        raise IntegrityError("event log drives counts negative")
    at = np.searchsorted(times, grid, side="right")
    return Trajectory(
        grid=grid,
        prevalence=inf[at] / n,
        mean_degree=2.0 * edg[at] / n,
        replica_id=replica_id,
    )


def smooth_moving_average(x: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average; edges use the available overlap only."""
    if window < 1:
        raise UsageError("window must be >= 1")
    if window == 1 or x.size == 0:
        return np.asarray(x, dtype=np.float64)
    kernel = np.ones(min(window, x.size))
    sums = np.convolve(x, kernel, mode="same")
    counts = np.convolve(np.ones_like(x), kernel, mode="same")
    return sums / counts


def count_waves(
    prevalence: np.ndarray,
    window: int = DEFAULT_WAVE_WINDOW,
    min_prominence: float = DEFAULT_WAVE_PROMINENCE,
) -> int:
    """Number of prominent local maxima of the smoothed prevalence curve."""
    if not 0.0 < min_prominence < 1.0:
        raise UsageError("prominence must be in (0, 1)")
    smoothed = smooth_moving_average(np.asarray(prevalence, dtype=np.float64), window)
    peaks, _ = find_peaks(smoothed, prominence=min_prominence)
    return len(peaks)
