"""Zone-level travel-time matrix and the behaviour-adjusted cost heuristics."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from .data import DataError, RouteBundle
from .zones import STATION_LABEL, ZoneId, inner_zone_difference


@dataclass(frozen=True)
class HeuristicParams:
    h: int = 9
    alpha: float = 1.04
    beta: float = 3.8
    gamma: float = 2.5

    def __post_init__(self):
        if int(self.h) != self.h or self.h < 1:
            raise ValueError(f"h must be a positive integer, got {self.h!r}")
        for name in ("alpha", "beta", "gamma"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")


@dataclass(frozen=True)
class ZoneCostMatrix:
    """``zones[0]`` is None and stands for the station."""

    zones: Tuple[Optional[ZoneId], ...]
    base: np.ndarray
    adjusted: Optional[np.ndarray] = None
    params: Optional[HeuristicParams] = None

    @property
    def labels(self):
        return [STATION_LABEL if z is None else z.raw for z in self.zones]

    def index_of(self, zone: ZoneId) -> int:
        return self.zones.index(zone)


def _units(bundle: RouteBundle, zones: Sequence[ZoneId]):
    members = bundle.zone_members()
    units = [bundle.indices([bundle.station_id])]
    for z in zones:
        if z not in members:
            raise DataError(f"route {bundle.route_id}: zone {z.raw!r} has no stops")
        units.append(bundle.indices(members[z]))
    return units


def zone_travel_matrix(bundle: RouteBundle, zones: Optional[Sequence[ZoneId]] = None) -> ZoneCostMatrix:
    """Mean directed stop-to-stop travel time between every pair of zones.

    The station is a one-stop unit at index 0. ``zones`` defaults to the
    bundle's zones in natural label order.
    """
    if zones is None:
        zones = bundle.zones()
    if not zones:
        raise DataError(f"route {bundle.route_id}: no zones (impute missing zones first)")
    units = _units(bundle, zones)
    T = bundle.travel_time
    n = len(units)
    base = np.zeros((n, n))
    for i, ui in enumerate(units):
        rows = T[ui]
        for j, uj in enumerate(units):
            if i != j:
                base[i, j] = rows[:, uj].mean()
    base.setflags(write=False)
    return ZoneCostMatrix(zones=(None, *zones), base=base)


def zone_centroid(bundle: RouteBundle, zone: ZoneId) -> Tuple[float, float]:
    members = bundle.zone_members().get(zone)
    if not members:
        raise DataError(f"route {bundle.route_id}: unknown zone {zone.raw!r}")
    lat = np.mean([bundle.stops[s].latitude for s in members])
    lng = np.mean([bundle.stops[s].longitude for s in members])
    return float(lat), float(lng)


def _top_h(values, labels, h):
    order = sorted(range(len(values)), key=lambda i: (values[i], labels[i]))
    return set(order[:h])


def apply_cost_heuristics(
    matrix: ZoneCostMatrix, bundle: RouteBundle, params: HeuristicParams = HeuristicParams()
) -> ZoneCostMatrix:
    """Fill ``adjusted`` from ``base``; exactly one multiplier per arc.

    * station -> zone: ``alpha`` unless the zone is among the ``h`` nearest by
      base travel time or among the ``h`` nearest by centroid distance;
    * zone -> zone, different (or incomparable) majors: ``beta``;
    * zone -> zone, same major, inner difference not exactly 1: ``gamma``;
    * everything else, including arcs into the station, unchanged.
    """
    zones = matrix.zones
    base = matrix.base
    n = len(zones)
    mult = np.ones((n, n))

    if n > 1:
        station = bundle.stops[bundle.station_id]
        labels = [z.raw for z in zones[1:]]
        by_time = _top_h(base[0, 1:].tolist(), labels, params.h)
        cents = np.array([zone_centroid(bundle, z) for z in zones[1:]])
        dist = np.hypot(cents[:, 0] - station.latitude, cents[:, 1] - station.longitude)
        by_dist = _top_h(dist.tolist(), labels, params.h)
        for k in range(n - 1):
            if k not in by_time and k not in by_dist:
                mult[0, k + 1] = params.alpha

    for i in range(1, n):
        for j in range(1, n):
            if i == j:
                continue
            a, b = zones[i], zones[j]
            if a.major != b.major:
                mult[i, j] = params.beta
            elif inner_zone_difference(a, b) != 1:
                mult[i, j] = params.gamma
    adjusted = base * mult
    np.fill_diagonal(adjusted, 0.0)
    adjusted.setflags(write=False)
    return replace(matrix, adjusted=adjusted, params=params)


def adjusted_zone_matrix(bundle: RouteBundle, params: HeuristicParams = HeuristicParams()) -> ZoneCostMatrix:
    return apply_cost_heuristics(zone_travel_matrix(bundle), bundle, params)


