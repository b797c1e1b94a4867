"""Planted synthetic routes with a known ground-truth sequence.

Layout: the station sits at the origin on a circle; zones are spread
counter-clockwise around that circle in planted visiting order and each
zone's stops lie on a short segment tangent to the circle. Zone labels follow
``<L>-<n>.<m><c>`` with consecutive majors and inner labels one step apart,
planned service times and package volumes shrink along the planted order
(heavier stops are served first).
"""

from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np

from .data import DROPOFF, STATION, PackageDims, RouteBundle, Stop, make_bundle
from .zones import parse_zone_id

ZONE_SPACING = 0.01  # degrees of arc between neighbouring zone centres
STOP_SPACING = 0.0015  # degrees between stops inside a zone
SECONDS_PER_DEGREE = 111_000 / 10.0  # ~10 m/s


def _split(total: int, parts: int) -> List[int]:
    base, extra = divmod(total, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def _zone_labels(rng: np.random.Generator, n_zones: int) -> List[str]:
    n_major = max(1, math.ceil(n_zones / 4))
    letter = chr(ord("A") + int(rng.integers(0, 8)))
    step = 1 if rng.random() < 0.5 else -1
    first = int(rng.integers(n_major, max(20, n_major + 1)))
    labels = []
    for k, size in enumerate(_split(n_zones, n_major)):
        major = f"{letter}-{first + step * k}"
        d = 1 if rng.random() < 0.5 else -1
        num = int(rng.integers(1, 4)) + (size if d < 0 else 0)
        ch = ord("A") + int(rng.integers(0, 3)) + (size if d < 0 else 0)
        for _ in range(size):
            labels.append(f"{major}.{num}{chr(ch)}")
            if rng.random() < 0.5:
                num += d
            else:
                ch += d
    return labels


def _route(rid: str, rng: np.random.Generator, zones_per_route, stops_per_zone, noise: float) -> RouteBundle:
    n_zones = int(rng.integers(zones_per_route[0], zones_per_route[1] + 1))
    labels = _zone_labels(rng, n_zones)
    radius = ZONE_SPACING * (n_zones + 1) / (2 * math.pi)
    centre = np.array([radius, 0.0])  # (lat, lng); the station at (0, 0) lies on the circle

    coords = [np.zeros(2)]
    zone_of: List[str] = [""]
    for i, label in enumerate(labels):
        phi = math.pi + 2 * math.pi * (i + 1) / (n_zones + 1)
        c = centre + radius * np.array([math.cos(phi), math.sin(phi)])
        tangent = np.array([-math.sin(phi), math.cos(phi)])
        normal = np.array([math.cos(phi), math.sin(phi)])
        q = int(rng.integers(stops_per_zone[0], stops_per_zone[1] + 1))
        offsets = (np.arange(q) - (q - 1) / 2) * STOP_SPACING
        for off in offsets:
            jitter = rng.uniform(-0.02, 0.02) * STOP_SPACING
            coords.append(c + off * tangent + jitter * normal)
            zone_of.append(label)
    coords = np.array(coords)
    n = len(coords)

    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    tt = dist * SECONDS_PER_DEGREE
    if noise > 0:
        tt = tt * (1.0 + rng.uniform(0.0, noise, size=(n, n)))
    np.fill_diagonal(tt, 0.0)

    # planted order: zones in label order of creation, nearest neighbour inside each zone
    members: dict = {}
    for idx in range(1, n):
        members.setdefault(zone_of[idx], []).append(idx)
    order = [0]
    prev_unit = [0]
    for label in labels:
        left = list(members[label])
        entry = min(left, key=lambda s: (dist[s, prev_unit].mean(), s))
        seq = [entry]
        left.remove(entry)
        while left:
            nxt = min(left, key=lambda s: (dist[seq[-1], s], s))
            seq.append(nxt)
            left.remove(nxt)
        order.extend(seq)
        prev_unit = members[label]

    width = len(str(n))
    ids = ["S" + "0" * width] + [f"P{k:0{width}d}" for k in range(1, n)]
    n_drop = n - 1
    rank = {stop: k for k, stop in enumerate(order)}
    stops = [Stop(ids[0], float(coords[0, 0]), float(coords[0, 1]), STATION)]
    for idx in range(1, n):
        frac = (rank[idx] - 1) / max(1, n_drop - 1)  # 0 for the first stop served, 1 for the last
        service = 30.0 + 90.0 * (1.0 - frac) + rng.uniform(0.0, 5.0)
        scale = 2.0 - frac
        pkgs = tuple(
            PackageDims(*(float(v) for v in rng.uniform(10.0, 30.0, size=3) * scale))
            for _ in range(int(rng.integers(1, 4)))
        )
        stops.append(
            Stop(
                ids[idx],
                float(coords[idx, 0]),
                float(coords[idx, 1]),
                DROPOFF,
                parse_zone_id(zone_of[idx]),
                round(service, 1),
                pkgs,
            )
        )
    perm = sorted(range(n), key=lambda k: ids[k])  # make_bundle wants sorted-id order
    return make_bundle(rid, stops, tt[np.ix_(perm, perm)], [ids[k] for k in order])


def generate_synthetic_dataset(
    n_routes: int,
    zones_per_route: Tuple[int, int] = (4, 8),
    stops_per_zone: Tuple[int, int] = (3, 6),
    noise: float = 0.1,
    seed: int = 0,
) -> List[RouteBundle]:
    """Deterministic list of planted routes (ground truth in ``actual_sequence``)."""
    if n_routes < 1:
        raise ValueError("n_routes must be >= 1")
    if zones_per_route[0] < 1 or zones_per_route[0] > zones_per_route[1]:
        raise ValueError("zones_per_route must be a nonempty range of positive integers")
    if stops_per_zone[0] < 1 or stops_per_zone[0] > stops_per_zone[1]:
        raise ValueError("stops_per_zone must be a nonempty range of positive integers")
    if noise < 0:
        raise ValueError("noise must be >= 0")
    width = len(str(n_routes - 1))
    seqs = np.random.SeedSequence(seed).spawn(n_routes)
    return [
        _route(f"R{r:0{width}d}", np.random.default_rng(s), zones_per_route, stops_per_zone, noise)
        for r, s in enumerate(seqs)
    ]
