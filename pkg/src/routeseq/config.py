"""Run configuration: defaults, a flat ``key = value`` file format, overrides.

Example file::

    # heuristics
    h = 9
    alpha = 1.04
    beta = 3.8
    gamma = 2.5
    # intra-zone candidates and post-processing
    k = 3
    p = 15
    theta = 1.22
    eta = 3
    # batch
    time_budget = 30
    seed = 0
    workers = 1
"""

from __future__ import annotations

import configparser
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Mapping

from .postprocess import PostProcessParams
from .tsp import DEFAULT_TIME_BUDGET
from .zone_cost import HeuristicParams

HEURISTIC_KEYS = ("h", "alpha", "beta", "gamma")
POST_KEYS = ("p", "theta", "eta")
RUN_KEYS = ("k", "time_budget", "seed", "workers")
ALL_KEYS = HEURISTIC_KEYS + POST_KEYS + RUN_KEYS
INT_KEYS = {"h", "k", "seed", "workers"}


@dataclass(frozen=True)
class RunConfig:
    heuristics: HeuristicParams = field(default_factory=HeuristicParams)
    post: PostProcessParams = field(default_factory=PostProcessParams)
    k: int = 3
    time_budget: float = DEFAULT_TIME_BUDGET
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not self.time_budget > 0:
            raise ValueError("time_budget must be > 0")

    def flat(self) -> Dict[str, Any]:
        out = dict(asdict(self.heuristics))
        out.update(asdict(self.post))
        out.update(k=self.k, time_budget=self.time_budget, seed=self.seed, workers=self.workers)
        return out

    def with_overrides(self, **values) -> "RunConfig":
        values = {k: v for k, v in values.items() if v is not None}
        unknown = set(values) - set(ALL_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        values = {k: coerce(k, v) for k, v in values.items()}
        heur = replace(self.heuristics, **{k: values[k] for k in HEURISTIC_KEYS if k in values})
        post = replace(self.post, **{k: values[k] for k in POST_KEYS if k in values})
        run = {k: values[k] for k in RUN_KEYS if k in values}
        return replace(self, heuristics=heur, post=post, **run)


def coerce(key: str, value):
    if key in INT_KEYS:
        f = float(value)
        if f != int(f):
            raise ValueError(f"{key} must be an integer, got {value!r}")
        return int(f)
    return float(value)


def parse_config_text(text: str) -> Dict[str, Any]:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.read_string("[run]\n" + text)
    return {k: v for k, v in cp["run"].items()}


def load_config(path=None, overrides: Mapping[str, Any] | None = None) -> RunConfig:
    """Defaults, then values from ``path``, then non-None ``overrides``."""
    cfg = RunConfig()
    if path is not None:
        cfg = cfg.with_overrides(**parse_config_text(Path(path).read_text(encoding="utf-8")))
    if overrides:
        cfg = cfg.with_overrides(**overrides)
    return cfg


def render_config(cfg: RunConfig) -> str:
    return "".join(f"{k} = {v}\n" for k, v in cfg.flat().items())
