"""Hierarchical prediction: zone tour first, then intra-zone Hamiltonian paths."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .data import DataError, RouteBundle, ZoneSequence, impute_missing_zones
from .tsp import DEFAULT_TIME_BUDGET, SCALE, solve_path, solve_tour
from .zone_cost import HeuristicParams, adjusted_zone_matrix

DEFAULT_K = 3


@dataclass(frozen=True)
class ZonePathInfo:
    zone: str
    n_stops: int
    pairs_attempted: int  # |M x N|, including skipped m == n pairs
    paths_solved: int
    cost: float
    optimal: bool


@dataclass(frozen=True)
class PredictedSequence:
    route_id: str
    order: Tuple[str, ...]
    zone_order: Optional[ZoneSequence] = None
    zone_tour_optimal: bool = True
    zone_paths: Tuple[ZonePathInfo, ...] = ()
    notes: Tuple[str, ...] = ()

    @property
    def all_optimal(self) -> bool:
        return self.zone_tour_optimal and all(z.optimal for z in self.zone_paths)

    def with_order(self, order, note=None) -> "PredictedSequence":
        notes = self.notes + ((note,) if note else ())
        return replace(self, order=tuple(order), notes=notes)


def _zone_tour(bundle, params, budget):
    zm = adjusted_zone_matrix(bundle, params)
    sol = solve_tour(zm.adjusted, time_budget=budget)
    return ZoneSequence(tuple(zm.zones[i] for i in sol.order[1:])), sol.optimal


def predict_zone_sequence(
    bundle: RouteBundle, params: HeuristicParams = HeuristicParams(), budget: float = DEFAULT_TIME_BUDGET
) -> ZoneSequence:
    """Zone order read off the optimal tour of the adjusted zone matrix, starting at the station."""
    return _zone_tour(bundle, params, budget)[0]


def _nearest(bundle: RouteBundle, cand: Sequence[str], unit_idx: np.ndarray, k: int) -> List[str]:
    # mean directed time from each candidate stop to every stop of the unit
    times = bundle.travel_time[np.ix_(bundle.indices(cand), unit_idx)].mean(axis=1)
    order = sorted(range(len(cand)), key=lambda i: (times[i], cand[i]))
    return [cand[i] for i in order[:k]]


def best_zone_path(
    bundle: RouteBundle,
    stops: Sequence[str],
    prev_unit: np.ndarray,
    next_unit: np.ndarray,
    k: int = DEFAULT_K,
    budget: float = DEFAULT_TIME_BUDGET,
):
    """Cheapest Hamiltonian path through ``stops`` over the candidate endpoints.

    Entry candidates are the ``k`` stops closest (mean travel time) to the
    previous unit, exit candidates the ``k`` closest to the next unit. Returns
    ``(path, cost, n_pairs, n_paths_solved, all_optimal)`` where ``n_pairs``
    counts every pair in M x N and ``n_paths_solved`` only those with m != n.
    """
    stops = sorted(stops)
    if len(stops) == 1:
        return [stops[0]], 0.0, 1, 1, True
    kk = min(k, len(stops))
    entry = _nearest(bundle, stops, prev_unit, kk)
    exit_ = _nearest(bundle, stops, next_unit, kk)
    pairs = [(m, n) for m in entry for n in exit_ if m != n]
    if not pairs:
        pairs = [(m, n) for m in stops for n in stops if m != n]
    idx = bundle.indices(stops)
    sub = bundle.travel_time[np.ix_(idx, idx)]
    subi = np.rint(sub * SCALE).astype(np.int64)
    pos = {s: i for i, s in enumerate(stops)}
    best = None
    all_optimal = True
    for rank, (m, n) in enumerate(pairs):
        sol = solve_path(sub, pos[m], pos[n], time_budget=budget)
        all_optimal &= sol.optimal
        o = np.asarray(sol.order)
        key = (int(subi[o[:-1], o[1:]].sum()), rank)
        if best is None or key < best[0]:
            best = (key, [stops[i] for i in sol.order], sol.cost)
    return best[1], best[2], len(entry) * len(exit_), len(pairs), all_optimal


def assemble_complete_sequence(
    bundle: RouteBundle,
    zone_seq: ZoneSequence,
    k: int = DEFAULT_K,
    budget: float = DEFAULT_TIME_BUDGET,
    zone_tour_optimal: bool = True,
) -> PredictedSequence:
    if k < 1:
        raise ValueError("k must be >= 1")
    if any(bundle.stops[s].zone is None for s in bundle.dropoff_ids()):
        raise DataError(f"route {bundle.route_id}: unzoned stops; impute missing zones first")
    members = bundle.zone_members()
    if set(zone_seq.zones) != set(members) or len(zone_seq.zones) != len(members):
        raise DataError(f"route {bundle.route_id}: zone sequence does not match the route's zones")
    station = bundle.station_id
    station_unit = bundle.indices([station])
    units = [station_unit] + [bundle.indices(members[z]) for z in zone_seq.zones] + [station_unit]

    order = [station]
    infos = []
    for i, z in enumerate(zone_seq.zones, start=1):
        path, cost, n_pairs, n_paths, opt = best_zone_path(bundle, members[z], units[i - 1], units[i + 1], k, budget)
        order.extend(path)
        infos.append(ZonePathInfo(z.raw, len(path), n_pairs, n_paths, cost, opt))
    return PredictedSequence(
        route_id=bundle.route_id,
        order=tuple(order),
        zone_order=zone_seq,
        zone_tour_optimal=zone_tour_optimal,
        zone_paths=tuple(infos),
    )


def predict_route(
    bundle: RouteBundle,
    params: HeuristicParams = HeuristicParams(),
    k: int = DEFAULT_K,
    budget: float = DEFAULT_TIME_BUDGET,
) -> PredictedSequence:
    if any(bundle.stops[s].zone is None for s in bundle.dropoff_ids()):
        bundle = impute_missing_zones(bundle)
    if not bundle.dropoff_ids():
        return PredictedSequence(bundle.route_id, (bundle.station_id,), ZoneSequence(()))
    zone_seq, zone_opt = _zone_tour(bundle, params, budget)
    return assemble_complete_sequence(bundle, zone_seq, k, budget, zone_opt)


__all__ = [
    "PredictedSequence",
    "ZonePathInfo",
    "predict_zone_sequence",
    "assemble_complete_sequence",
    "best_zone_path",
    "predict_route",
]
