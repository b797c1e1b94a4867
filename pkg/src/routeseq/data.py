"""Route bundles: loading, zone imputation, zone sequences, property statistics, splitting."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .zones import (
    STATION_LABEL,
    ZoneId,
    inner_zone_difference,
    major_zone_difference,
    parse_zone_id,
    zone_sort_key,
)

STATION = "Station"
DROPOFF = "Dropoff"


class DataError(ValueError):
    """Raised when input files or bundles violate the expected schema."""


@dataclass(frozen=True)
class PackageDims:
    depth: float
    width: float
    height: float

    def __post_init__(self):
        for name in ("depth", "width", "height"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DataError(f"package {name} must be finite and > 0, got {v!r}")

    @property
    def volume(self) -> float:
        return self.depth * self.width * self.height


@dataclass(frozen=True)
class Stop:
    stop_id: str
    latitude: float
    longitude: float
    kind: str = DROPOFF
    zone: Optional[ZoneId] = None
    planned_service_time: float = 0.0
    packages: Tuple[PackageDims, ...] = ()

    @property
    def is_station(self) -> bool:
        return self.kind == STATION

    @property
    def volume(self) -> float:
        return sum(p.volume for p in self.packages)


@dataclass(frozen=True)
class RouteBundle:
    """One delivery route.

    ``stop_ids`` fixes the row/column order of ``travel_time`` (ascending ids).
    """

    route_id: str
    stops: Mapping[str, Stop]
    stop_ids: Tuple[str, ...]
    travel_time: np.ndarray
    actual_sequence: Optional[Tuple[str, ...]] = None
    _index: Dict[str, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.stop_ids)})
        self.travel_time.setflags(write=False)

    @property
    def station_id(self) -> str:
        for sid in self.stop_ids:
            if self.stops[sid].is_station:
                return sid
        raise DataError(f"route {self.route_id}: no station")

    def index(self, stop_id: str) -> int:
        return self._index[stop_id]

    def indices(self, stop_ids: Iterable[str]) -> np.ndarray:
        return np.fromiter((self._index[s] for s in stop_ids), dtype=np.int64)

    def dropoff_ids(self) -> List[str]:
        return [s for s in self.stop_ids if not self.stops[s].is_station]

    def zones(self) -> List[ZoneId]:
        """Distinct zones of the dropoffs in natural label order."""
        zs = {self.stops[s].zone for s in self.dropoff_ids() if self.stops[s].zone is not None}
        return sorted(zs, key=zone_sort_key)

    def zone_members(self) -> Dict[ZoneId, List[str]]:
        members: Dict[ZoneId, List[str]] = {}
        for sid in self.stop_ids:
            z = self.stops[sid].zone
            if z is not None and not self.stops[sid].is_station:
                members.setdefault(z, []).append(sid)
        return members


def make_bundle(
    route_id: str,
    stops: Sequence[Stop],
    travel_time: Mapping[str, Mapping[str, float]] | np.ndarray,
    actual_sequence: Optional[Sequence[str]] = None,
) -> RouteBundle:
    """Build and validate a bundle.

    ``travel_time`` is either a nested mapping ``from -> to -> seconds`` or a
    square array ordered like the sorted stop ids.
    """
    by_id: Dict[str, Stop] = {}
    for s in stops:
        if s.stop_id in by_id:
            raise DataError(f"route {route_id}: duplicate stop_id {s.stop_id!r}")
        if not (-90.0 <= s.latitude <= 90.0 and -180.0 <= s.longitude <= 180.0):
            raise DataError(f"route {route_id}: stop {s.stop_id!r} has out-of-range coordinates")
        if s.planned_service_time < 0:
            raise DataError(f"route {route_id}: stop {s.stop_id!r} field planned_service_time < 0")
        by_id[s.stop_id] = s
    stations = [s for s in by_id.values() if s.is_station]
    if len(stations) != 1:
        raise DataError(f"route {route_id}: expected exactly one Station stop, found {len(stations)}")
    if stations[0].packages:
        raise DataError(f"route {route_id}: station {stations[0].stop_id!r} must not carry packages")
    ids = tuple(sorted(by_id))
    n = len(ids)

    if isinstance(travel_time, np.ndarray):
        T = np.array(travel_time, dtype=np.float64)
        if T.shape != (n, n):
            raise DataError(f"route {route_id}: travel_time shape {T.shape} != {(n, n)}")
    else:
        T = np.empty((n, n), dtype=np.float64)
        for i, a in enumerate(ids):
            row = travel_time.get(a)
            if row is None:
                raise DataError(f"route {route_id}: travel_time missing row for stop {a!r}")
            for j, b in enumerate(ids):
                if a == b:
                    T[i, j] = row.get(b, 0.0)
                    continue
                if b not in row:
                    raise DataError(f"route {route_id}: travel_time missing pair ({a!r}, {b!r})")
                T[i, j] = row[b]
    if not np.all(np.isfinite(T)) or np.any(T < 0):
        raise DataError(f"route {route_id}: travel_time entries must be finite and >= 0")
    np.fill_diagonal(T, 0.0)

    actual = None
    if actual_sequence is not None:
        actual = tuple(actual_sequence)
        if sorted(actual) != list(ids):
            raise DataError(f"route {route_id}: actual_sequence is not a permutation of the stops")
        if not by_id[actual[0]].is_station:
            raise DataError(f"route {route_id}: actual_sequence must start at the station")
    return RouteBundle(route_id=route_id, stops=by_id, stop_ids=ids, travel_time=T, actual_sequence=actual)


# --------------------------------------------------------------------------
# file loading
# --------------------------------------------------------------------------


def _read_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _num(route_id, where, value) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise DataError(f"route {route_id}: field {where} is not a number: {value!r}") from None
    if not math.isfinite(v):
        raise DataError(f"route {route_id}: field {where} is not finite")
    return v


def _parse_packages(route_id, stop_id, entry) -> Tuple[float, Tuple[PackageDims, ...]]:
    # Documented layout: {planned_service_time_seconds, packages: [{depth_cm, ...}]}.
    # Challenge layout: {package_id: {planned_service_time_seconds, dimensions: {...}}}.
    if entry is None:
        return 0.0, ()
    if not isinstance(entry, Mapping):
        raise DataError(f"route {route_id}: stop {stop_id}: package entry must be an object")
    if "packages" in entry or "planned_service_time_seconds" in entry:
        pst = _num(route_id, f"{stop_id}.planned_service_time_seconds", entry.get("planned_service_time_seconds", 0.0))
        raw_pkgs = entry.get("packages", [])
        dims = []
        for k, p in enumerate(raw_pkgs):
            dims.append(_dims(route_id, f"{stop_id}.packages[{k}]", p))
        return pst, tuple(dims)
    pst = 0.0
    dims = []
    for pkg_id in sorted(entry):
        p = entry[pkg_id]
        if not isinstance(p, Mapping) or "dimensions" not in p:
            raise DataError(f"route {route_id}: stop {stop_id}: unrecognised package entry {pkg_id!r}")
        pst += _num(route_id, f"{stop_id}.{pkg_id}.planned_service_time_seconds", p.get("planned_service_time_seconds", 0.0))
        dims.append(_dims(route_id, f"{stop_id}.{pkg_id}.dimensions", p["dimensions"]))
    return pst, tuple(dims)


def _dims(route_id, where, p) -> PackageDims:
    try:
        return PackageDims(
            depth=_num(route_id, f"{where}.depth_cm", p["depth_cm"]),
            width=_num(route_id, f"{where}.width_cm", p["width_cm"]),
            height=_num(route_id, f"{where}.height_cm", p["height_cm"]),
        )
    except KeyError as exc:
        raise DataError(f"route {route_id}: field {where}.{exc.args[0]} missing") from None
    except DataError as exc:
        if str(exc).startswith("route "):
            raise
        raise DataError(f"route {route_id}: field {where}: {exc}") from None


def _sequence_from_ranks(route_id, ranks) -> List[str]:
    if isinstance(ranks, Mapping) and "actual" in ranks and isinstance(ranks["actual"], Mapping):
        ranks = ranks["actual"]
    if not isinstance(ranks, Mapping):
        raise DataError(f"route {route_id}: actual sequence must map stop_id -> index")
    pos = {sid: int(_num(route_id, f"actual.{sid}", v)) for sid, v in ranks.items()}
    if sorted(pos.values()) != list(range(len(pos))):
        raise DataError(f"route {route_id}: actual sequence indices are not 0..n-1")
    return sorted(pos, key=pos.__getitem__)


def bundle_from_records(route_id, route_rec, tt_rec, pkg_rec=None, seq_rec=None) -> RouteBundle:
    if not isinstance(route_rec, Mapping) or "stops" not in route_rec:
        raise DataError(f"route {route_id}: field stops missing")
    pkg_rec = pkg_rec or {}
    stops = []
    for sid, s in route_rec["stops"].items():
        try:
            kind = s["type"]
            lat = _num(route_id, f"{sid}.lat", s["lat"])
            lng = _num(route_id, f"{sid}.lng", s["lng"])
        except KeyError as exc:
            raise DataError(f"route {route_id}: stop {sid}: field {exc.args[0]} missing") from None
        if kind not in (STATION, DROPOFF):
            raise DataError(f"route {route_id}: stop {sid}: field type must be Station or Dropoff")
        raw_zone = s.get("zone_id")
        zone = None
        if kind == DROPOFF and isinstance(raw_zone, str) and raw_zone and raw_zone.lower() != "nan":
            zone = parse_zone_id(raw_zone)
        pst, pkgs = (0.0, ()) if kind == STATION else _parse_packages(route_id, sid, pkg_rec.get(sid))
        stops.append(Stop(sid, lat, lng, kind, zone, pst, pkgs))
    if tt_rec is None:
        raise DataError(f"route {route_id}: travel_time missing")
    actual = _sequence_from_ranks(route_id, seq_rec) if seq_rec is not None else None
    return make_bundle(route_id, stops, tt_rec, actual)


def load_dataset(
    route_file, travel_time_file, package_file, actual_sequence_file=None, errors: Optional[dict] = None
) -> Dict[str, RouteBundle]:
    """Load route bundles keyed by route_id, in ascending route_id order.

    With ``errors`` given, routes that fail validation are recorded there
    (route_id -> message) and skipped instead of raising.
    """
    routes = _read_json(route_file)
    tts = _read_json(travel_time_file)
    pkgs = _read_json(package_file) if package_file is not None else {}
    seqs = _read_json(actual_sequence_file) if actual_sequence_file is not None else None
    out: Dict[str, RouteBundle] = {}
    for rid in sorted(routes):
        try:
            if rid not in tts:
                raise DataError(f"route {rid}: travel_time missing")
            seq = None
            if seqs is not None:
                if rid not in seqs:
                    raise DataError(f"route {rid}: actual sequence missing")
                seq = seqs[rid]
            out[rid] = bundle_from_records(rid, routes[rid], tts[rid], pkgs.get(rid), seq)
        except DataError as exc:
            if errors is None:
                raise
            errors[rid] = str(exc)
    return out


def dump_dataset(bundles: Iterable[RouteBundle], route_file, travel_time_file, package_file, actual_sequence_file=None):
    """Write bundles in the four-file JSON layout read by :func:`load_dataset`."""
    routes, tts, pkgs, seqs = {}, {}, {}, {}
    for b in sorted(bundles, key=lambda b: b.route_id):
        routes[b.route_id] = {
            "stops": {
                sid: {
                    "lat": s.latitude,
                    "lng": s.longitude,
                    "type": s.kind,
                    "zone_id": s.zone.raw if s.zone is not None else None,
                }
                for sid, s in ((sid, b.stops[sid]) for sid in b.stop_ids)
            }
        }
        tts[b.route_id] = {
            a: {c: float(b.travel_time[i, j]) for j, c in enumerate(b.stop_ids)} for i, a in enumerate(b.stop_ids)
        }
        pkgs[b.route_id] = {
            sid: {
                "planned_service_time_seconds": b.stops[sid].planned_service_time,
                "packages": [
                    {"depth_cm": p.depth, "width_cm": p.width, "height_cm": p.height} for p in b.stops[sid].packages
                ],
            }
            for sid in b.dropoff_ids()
        }
        if b.actual_sequence is not None:
            seqs[b.route_id] = sequence_to_ranks(b.actual_sequence)
    files = [(route_file, routes), (travel_time_file, tts), (package_file, pkgs)]
    if actual_sequence_file is not None:
        files.append((actual_sequence_file, seqs))
    for path, payload in files:
        Path(path).write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")


def sequence_to_ranks(order: Sequence[str]) -> Dict[str, int]:
    return {sid: i for i, sid in enumerate(order)}


# --------------------------------------------------------------------------
# zones on bundles
# --------------------------------------------------------------------------


def impute_missing_zones(bundle: RouteBundle) -> RouteBundle:
    """Give each unzoned dropoff the zone of its travel-time-nearest zoned stop."""
    drops = bundle.dropoff_ids()
    zoned = [s for s in drops if bundle.stops[s].zone is not None]
    missing = [s for s in drops if bundle.stops[s].zone is None]
    if not zoned:
        raise DataError(f"route {bundle.route_id}: no stop has a zone; route unusable for zoning")
    if not missing:
        return bundle
    cand = bundle.indices(zoned)  # ascending stop_id, so argmin breaks ties by id
    stops = dict(bundle.stops)
    for sid in missing:
        row = bundle.travel_time[bundle.index(sid), cand]
        nearest = zoned[int(np.argmin(row))]
        stops[sid] = replace(stops[sid], zone=bundle.stops[nearest].zone)
    return replace(bundle, stops=stops)


@dataclass(frozen=True)
class ZoneSequence:
    """Zone visit order; the station marker is implicit at position 0."""

    zones: Tuple[ZoneId, ...]

    def __post_init__(self):
        if len(set(self.zones)) != len(self.zones):
            raise DataError("zone sequence repeats a zone")

    @property
    def labels(self) -> List[str]:
        return [STATION_LABEL] + [z.raw for z in self.zones]

    def __len__(self):
        return len(self.zones) + 1


def zone_order_of(bundle: RouteBundle, order: Sequence[str]) -> ZoneSequence:
    seen = []
    got = set()
    for sid in order:
        z = bundle.stops[sid].zone
        if z is None or bundle.stops[sid].is_station:
            continue
        if z not in got:
            got.add(z)
            seen.append(z)
    return ZoneSequence(tuple(seen))


def extract_zone_sequence(bundle: RouteBundle) -> ZoneSequence:
    if bundle.actual_sequence is None:
        raise DataError(f"route {bundle.route_id}: no actual sequence")
    return zone_order_of(bundle, bundle.actual_sequence)


@dataclass(frozen=True)
class ZonePropertyStats:
    n_pairs: int
    n_same_major: int
    n_inner_diff_one: int
    n_major_change: int
    n_major_diff_one: int

    @staticmethod
    def _ratio(num, den):
        return num / den if den else None

    @property
    def same_major_fraction(self) -> Optional[float]:
        return self._ratio(self.n_same_major, self.n_pairs)

    @property
    def inner_diff_one_fraction(self) -> Optional[float]:
        return self._ratio(self.n_inner_diff_one, self.n_same_major)

    @property
    def major_diff_one_fraction(self) -> Optional[float]:
        return self._ratio(self.n_major_diff_one, self.n_major_change)

    def lines(self) -> List[str]:
        def fmt(x):
            return "undefined" if x is None else f"{100 * x:.2f}%"

        return [
            f"same major zone       : {fmt(self.same_major_fraction)} ({self.n_same_major}/{self.n_pairs})",
            f"inner difference of 1 : {fmt(self.inner_diff_one_fraction)} ({self.n_inner_diff_one}/{self.n_same_major})",
            f"major difference of 1 : {fmt(self.major_diff_one_fraction)} ({self.n_major_diff_one}/{self.n_major_change})",
        ]


def zone_property_stats(bundles: Iterable[RouteBundle]) -> ZonePropertyStats:
    bundles = list(bundles)
    if not bundles:
        raise DataError("zone_property_stats needs at least one route")
    pairs = same = inner1 = change = major1 = 0
    for b in bundles:
        seq = extract_zone_sequence(b).zones
        for a, c in zip(seq, seq[1:]):
            pairs += 1
            if a.major == c.major:
                same += 1
                inner1 += inner_zone_difference(a, c) == 1
            else:
                change += 1
                major1 += major_zone_difference(a, c) == 1
    return ZonePropertyStats(pairs, same, inner1, change, major1)


def split_dataset(bundles, train_fraction: float, seed: int):
    """Seeded random train/test split; ``round-half-up(train_fraction * N)`` routes go to train.

    Accepts a mapping (route_id -> bundle) or a sequence of bundles and returns
    two objects of the same kind.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    is_map = isinstance(bundles, Mapping)
    items = sorted(bundles.items()) if is_map else sorted(((b.route_id, b) for b in bundles), key=lambda kv: kv[0])
    n = len(items)
    n_train = int(math.floor(train_fraction * n + 0.5))
    perm = np.random.default_rng(seed).permutation(n)
    train_idx = sorted(perm[:n_train].tolist())
    test_idx = sorted(perm[n_train:].tolist())
    train = [items[i] for i in train_idx]
    test = [items[i] for i in test_idx]
    if is_map:
        return dict(train), dict(test)
    return [b for _, b in train], [b for _, b in test]
