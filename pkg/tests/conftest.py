import string

import numpy as np
import pytest

from routeseq.data import DROPOFF, STATION, PackageDims, Stop, make_bundle
from routeseq.zones import parse_zone_id

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def dropoff_ids(n):
    """'A', 'B', ... skipping 'S' (the station)."""
    return [c for c in string.ascii_uppercase if c != "S"][:n]


def build_bundle(route_id="R", zones=None, coords=None, times=None, service=None, volumes=None, actual=None):
    """Small bundle: stop 'S' is the station, dropoffs are 'A', 'B', ... in given order.

    ``zones`` lists zone labels (or None) per dropoff; ``times`` is a full
    matrix in the order S, A, B, ... or None for Euclidean distance on ``coords``.
    """
    zones = zones or []
    n = len(zones)
    ids = ["S"] + dropoff_ids(n)
    if coords is None:
        coords = [(0.0, 0.0)] + [(0.001 * (i + 1), 0.0) for i in range(n)]
    service = service or [60.0] * n
    volumes = volumes or [1000.0] * n
    stops = [Stop("S", coords[0][0], coords[0][1], STATION)]
    for i in range(n):
        z = parse_zone_id(zones[i]) if zones[i] else None
        pk = (PackageDims(volumes[i], 1.0, 1.0),) if volumes[i] > 0 else ()
        stops.append(Stop(ids[i + 1], coords[i + 1][0], coords[i + 1][1], DROPOFF, z, service[i], pk))
    if times is None:
        c = np.array([(s.latitude, s.longitude) for s in stops])
        times = np.hypot(c[:, None, 0] - c[None, :, 0], c[:, None, 1] - c[None, :, 1]) * 1e4
    times = np.asarray(times, dtype=float)
    perm = [ids.index(s) for s in sorted(ids)]
    return make_bundle(route_id, stops, times[np.ix_(perm, perm)], actual)


@pytest.fixture
def bundle_factory():
    return build_bundle


def write_challenge_layout(bundles, out_dir):
    """Write bundles the way the public challenge files nest them.

    Packages are keyed by package id with a ``dimensions`` object and the
    actual sequences sit under an ``actual`` key; routes carry extra fields.
    """
    import json

    from routeseq.data import dump_dataset

    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [out_dir / n for n in ("route_data.json", "travel_times.json", "package_data.json", "actual_sequences.json")]
    dump_dataset(bundles, *paths)
    routes = json.loads(paths[0].read_text())
    for rid, rec in routes.items():
        rec.update(station_code="DXX1", date_YYYY_MM_DD="2018-07-27", route_score="High")
    pkgs = json.loads(paths[2].read_text())
    nested = {}
    for rid, stops in pkgs.items():
        nested[rid] = {}
        for sid, entry in stops.items():
            per = {}
            n = max(1, len(entry["packages"]))
            for k, p in enumerate(entry["packages"]):
                per[f"PackageID_{sid}_{k}"] = {
                    "scan_status": "DELIVERED",
                    "planned_service_time_seconds": entry["planned_service_time_seconds"] / n,
                    "dimensions": p,
                }
            nested[rid][sid] = per
    seqs = json.loads(paths[3].read_text())
    paths[0].write_text(json.dumps(routes))
    paths[2].write_text(json.dumps(nested))
    paths[3].write_text(json.dumps({rid: {"actual": r} for rid, r in seqs.items()}))
    return paths
