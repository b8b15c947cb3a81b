"""Run configuration: defaults, config files, and flag merging.

A config file is a single flat JSON object; keys match RunConfig field
names. Values given on the command line override file values, which
override the built-in defaults. Within each rate pair (beta, beta_prime)
and (a, a_prime), setting one member in a layer clears the other, so
``--beta 0.5`` on top of a file that sets beta_prime does what it looks
like it does.

Scaled rates resolve against the measured mean degree of the generated
graph, not the requested target, and the resolved values go into every
output header.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from typing import Any, Mapping, Sequence

from .engines import ALGORITHMS
from .engines.backend import BACKENDS
from .errors import UsageError
from .generators import GRAPH_KINDS, GraphSpec
from .observables import (DEFAULT_GRID_POINTS, DEFAULT_WAVE_PROMINENCE,
                          DEFAULT_WAVE_WINDOW)
from .params import Params, resolve_params

# one member of each pair may be set; the other must stay None
_PAIRED = (("beta", "beta_prime"), ("a", "a_prime"))


@dataclass(frozen=True)
class RunConfig:
    graph: str = "er"
    n: int = 1000
    p: float | None = None                  # er edge probability
    m: int | None = None                    # ba attachment count
    degree_target: float | None = None      # geom calibration target
    alpha: float = 1.0
    beta: float | None = None
    beta_prime: float | None = 3.0
    a: float | None = None
    a_prime: float | None = 2.0
    b: float = 2.0
    horizon: float = 20.0
    infected_frac: float = 0.1
    replicas: int = 1
    seed: int = 0
    grid: int = DEFAULT_GRID_POINTS
    wave_window: int = DEFAULT_WAVE_WINDOW
    wave_prominence: float = DEFAULT_WAVE_PROMINENCE
    algorithm: str = "icon"
    backend: str | None = None
    timeout_secs: float | None = None
    out: str | None = None
    events_out: str | None = None
    triples: tuple[tuple[float, float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "triples", parse_triples(self.triples))
        if self.graph not in GRAPH_KINDS:
            raise UsageError(f"unknown graph kind {self.graph!r}")
        if self.n < 2:
            raise UsageError("need n >= 2")
        if not 0.0 <= self.infected_frac <= 1.0:
            raise UsageError("infected_frac must be in [0, 1]")
        if self.replicas < 1:
            raise UsageError("need replicas >= 1")
        if self.grid < 2:
            raise UsageError("grid needs at least 2 points")
        if self.wave_window < 1:
            raise UsageError("wave_window must be >= 1")
        if not 0.0 < self.wave_prominence < 1.0:
            raise UsageError("wave_prominence must be in (0, 1)")
        if self.algorithm not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {self.algorithm!r}")
        if self.backend is not None and self.backend not in BACKENDS + ("auto",):
            raise UsageError(f"unknown backend {self.backend!r}")
        if self.timeout_secs is not None and self.timeout_secs <= 0:
            raise UsageError("timeout_secs must be > 0")
        for absolute, scaled in _PAIRED:
            if getattr(self, absolute) is None and getattr(self, scaled) is None:
                raise UsageError(f"one of {absolute} / {scaled} is required")

    def graph_spec(self) -> GraphSpec:
        """Graph parameters, defaulting to the mean-degree-5 family."""
        if self.graph == "er":
            p = self.p if self.p is not None else 5.0 / (self.n - 1)
            return GraphSpec(kind="er", n=self.n, p=p)
        if self.graph == "ba":
            return GraphSpec(kind="ba", n=self.n,
                             m=self.m if self.m is not None else 5)
        target = self.degree_target if self.degree_target is not None else 5.0
        return GraphSpec(kind="geom", n=self.n, target_mean_degree=target)

    def resolve(self, mean_degree: float) -> Params:
        return resolve_params(
            alpha=self.alpha, b=self.b, horizon=self.horizon,
            n=self.n, mean_degree=mean_degree,
            beta=self.beta, beta_prime=self.beta_prime,
            a=self.a, a_prime=self.a_prime)

    def with_values(self, **values: Any) -> "RunConfig":
        return merge_config(self, values)

    def as_dict(self) -> dict[str, Any]:
        """Flat dict with None entries dropped; JSON round trips."""
        d = asdict(self)
        d["triples"] = [list(t) for t in self.triples]
        if not d["triples"]:
            del d["triples"]
        return {k: v for k, v in d.items() if v is not None}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}

_INT_KEYS = {"n", "m", "replicas", "seed", "grid", "wave_window"}
_FLOAT_KEYS = {"p", "degree_target", "alpha", "beta", "beta_prime",
               "a", "a_prime", "b", "horizon", "infected_frac",
               "timeout_secs", "wave_prominence"}
_STR_KEYS = {"graph", "algorithm", "backend", "out", "events_out"}


def parse_triples(raw: Any) -> tuple[tuple[float, float, float], ...]:
    """Accept [[3,2,2], ...] or the string form "3,2,2;6,2,2"."""
    if isinstance(raw, str):
        raw = [part for part in raw.replace(";", " ").split() if part]
    out = []
    for item in raw:
        if isinstance(item, str):
            item = item.split(",")
        try:
            vals = tuple(float(x) for x in item)
        except (TypeError, ValueError):
            raise UsageError(f"bad sweep triple {item!r}")
        if len(vals) != 3:
            raise UsageError(
                f"sweep triple needs exactly beta_prime,a_prime,b: {item!r}")
        if any(v < 0 for v in vals):
            raise UsageError(f"sweep triple has a negative rate: {item!r}")
        out.append(vals)
    return tuple(out)


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    if key == "triples":
        return parse_triples(value)
    try:
        if key in _INT_KEYS:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _STR_KEYS:
            if not isinstance(value, str):
                raise ValueError
            return value
    except (TypeError, ValueError):
        raise UsageError(f"config value {key}={value!r} has the wrong type")
    raise UsageError(f"unknown config key {key!r}")


def load_config(path) -> dict[str, Any]:
    """Read a flat JSON config file into a {field: value} dict."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise UsageError(f"config {path} must hold a single JSON object")
    unknown = sorted(set(raw) - set(_FIELD_TYPES))
    if unknown:
        raise UsageError(f"config {path}: unknown keys {', '.join(unknown)}")
    return {k: _coerce(k, v) for k, v in raw.items()}


def merge_config(base: RunConfig | None, *layers: Mapping[str, Any]) -> RunConfig:
    """Layer value dicts over a base config; later layers win.

    None values in a layer mean "not given" and are skipped. A layer
    that sets the absolute member of a rate pair clears the scaled one
    (and vice versa) unless the same layer sets both, which Params
    resolution then rejects.
    """
    values = asdict(base) if base is not None else {
        f.name: f.default for f in fields(RunConfig)}
    for layer in layers:
        given = {k: _coerce(k, v) for k, v in layer.items() if v is not None}
        for absolute, scaled in _PAIRED:
            if absolute in given and scaled not in given:
                values[scaled] = None
            elif scaled in given and absolute not in given:
                values[absolute] = None
        values.update(given)
    return RunConfig(**values)


def resolved_dict(config: RunConfig, params: Params | None,
                  mean_degree: float | None) -> dict[str, Any]:
    """The config plus the values actually used after scaling."""
    d = config.as_dict()
    if mean_degree is not None:
        d["measured_mean_degree"] = mean_degree
    if params is not None:
        d["resolved_beta"] = params.beta
        d["resolved_a"] = params.a
    return d


def header_lines(version: str, config: RunConfig, params: Params | None,
                 mean_degree: float | None,
                 extra: Sequence[str] = ()) -> list[str]:
    """Comment block stamped on every output file."""
    d = resolved_dict(config, params, mean_degree)
    lines = [f"coevosim {version}",
             f"seed={config.seed}",
             "config=" + json.dumps(d, sort_keys=True)]
    lines.extend(extra)
    return lines
