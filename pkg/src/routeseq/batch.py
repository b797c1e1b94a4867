"""Batch prediction/evaluation over many routes and hyperparameter grid search."""

from __future__ import annotations

import itertools
import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .config import ALL_KEYS, RunConfig, coerce
from .postprocess import postprocess
from .scorer import BatchScore, ScoreReport, score_route
from .sequencer import predict_route
from .tsp import BudgetExceededWarning

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RouteResult:
    route_id: str
    order: Optional[Tuple[str, ...]] = None
    report: Optional[ScoreReport] = None
    error: Optional[str] = None
    all_optimal: bool = True
    notes: Tuple[str, ...] = ()


def predict_one(bundle, cfg: RunConfig):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BudgetExceededWarning)
        pred = predict_route(bundle, cfg.heuristics, cfg.k, cfg.time_budget)
    return postprocess(pred, bundle, cfg.post)


def _run_one(job) -> RouteResult:
    bundle, cfg, score = job
    try:
        pred = predict_one(bundle, cfg)
        report = None
        if score:
            if bundle.actual_sequence is None:
                raise ValueError(f"route {bundle.route_id}: no actual sequence to score against")
            report = score_route(bundle.actual_sequence, pred.order, bundle)
        return RouteResult(bundle.route_id, pred.order, report, None, pred.all_optimal, pred.notes)
    except Exception as exc:  # isolate per-route failures
        return RouteResult(bundle.route_id, error=f"{type(exc).__name__}: {exc}")


def run_batch(bundles: Iterable, cfg: RunConfig, score: bool = True) -> List[RouteResult]:
    """Predict (and optionally score) every route; results sorted by route_id."""
    bundles = sorted(bundles, key=lambda b: b.route_id)
    jobs = [(b, cfg, score) for b in bundles]
    if cfg.workers > 1 and len(jobs) > 1:
        chunk = max(1, math.ceil(len(jobs) / (4 * cfg.workers)))
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_one, jobs, chunksize=chunk))
    else:
        results = [_run_one(j) for j in jobs]
    return sorted(results, key=lambda r: r.route_id)


def batch_score(results: Sequence[RouteResult]) -> BatchScore:
    reports = [r.report for r in results if r.report is not None]
    errors = {r.route_id: r.error for r in results if r.error is not None}
    return BatchScore(reports, errors)


def evaluate(bundles, cfg: RunConfig) -> Tuple[List[RouteResult], BatchScore]:
    results = run_batch(bundles, cfg, score=True)
    return results, batch_score(results)


# --------------------------------------------------------------------------
# grid search
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GridRow:
    params: Tuple[Tuple[str, float], ...]
    mean_score: Optional[float]
    n_scored: int
    n_errors: int

    def sort_key(self):
        m = math.inf if self.mean_score is None else self.mean_score
        return (m, tuple(v for _, v in self.params))


def parse_grid(spec: Mapping[str, Sequence]) -> Dict[str, List]:
    if not spec:
        raise ValueError("grid spec is empty")
    grid = {}
    for key in sorted(spec):
        if key not in ALL_KEYS:
            raise ValueError(f"unknown grid parameter {key!r}")
        values = list(spec[key])
        if not values:
            raise ValueError(f"grid parameter {key!r} has no values")
        grid[key] = [coerce(key, v) for v in values]
    return grid


def grid_search(bundles, cfg: RunConfig, grid: Mapping[str, Sequence]) -> List[GridRow]:
    """Evaluate every point of the Cartesian grid; rows sorted best (lowest mean) first."""
    grid = parse_grid(grid)
    bundles = list(bundles)
    names = list(grid)
    rows = []
    for values in itertools.product(*(grid[n] for n in names)):
        point = dict(zip(names, values))
        _, bs = evaluate(bundles, cfg.with_overrides(**point))
        rows.append(GridRow(tuple(point.items()), bs.mean, len(bs.reports), len(bs.errors)))
        log.info("grid point %s -> %s", point, bs.mean)
    return sorted(rows, key=GridRow.sort_key)
