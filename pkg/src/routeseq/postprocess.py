"""Reversal correction and the validity check with zone-sort fallback."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .data import RouteBundle
from .sequencer import PredictedSequence
from .zones import natural_key


@dataclass(frozen=True)
class PostProcessParams:
    p: float = 15.0
    theta: float = 1.22
    eta: float = 3.0

    def __post_init__(self):
        if not 0 < self.p <= 50:
            raise ValueError("p must be a percentage in (0, 50]")
        if not (self.theta > 0 and self.eta > 0):
            raise ValueError("theta and eta must be > 0")


def window_size(n: int, p: float) -> int:
    return max(1, math.ceil(p / 100.0 * n))


def _should_reverse(head: float, tail: float, threshold: float) -> bool:
    if head == 0:
        return tail > 0
    return tail / head >= threshold


def _reversed(seq: PredictedSequence, note: str) -> PredictedSequence:
    return seq.with_order((seq.order[0], *reversed(seq.order[1:])), note)


def service_time_ratio_parts(seq: Sequence[str], bundle: RouteBundle, p: float) -> Tuple[float, float]:
    body = list(seq[1:])
    m = window_size(len(body), p)
    head = sum(bundle.stops[s].planned_service_time for s in body[:m]) / m
    tail = sum(bundle.stops[s].planned_service_time for s in body[-m:]) / m
    return head, tail


def volume_ratio_parts(seq: Sequence[str], bundle: RouteBundle, p: float) -> Tuple[float, float]:
    body = list(seq[1:])
    m = window_size(len(body), p)
    head = sum(bundle.stops[s].volume for s in body[:m])
    tail = sum(bundle.stops[s].volume for s in body[-m:])
    return head, tail


def reverse_by_service_time(
    seq: PredictedSequence, bundle: RouteBundle, params: PostProcessParams = PostProcessParams()
) -> Tuple[PredictedSequence, bool]:
    """Reverse the dropoffs when the tail's mean planned service time is at least ``theta`` x the head's."""
    if len(seq.order) < 3:
        return seq, False
    head, tail = service_time_ratio_parts(seq.order, bundle, params.p)
    if _should_reverse(head, tail, params.theta):
        return _reversed(seq, "reversed: service time"), True
    return seq, False


def reverse_by_volume(
    seq: PredictedSequence, bundle: RouteBundle, params: PostProcessParams = PostProcessParams()
) -> Tuple[PredictedSequence, bool]:
    """Reverse the dropoffs when the tail's total package volume is at least ``eta`` x the head's.

    Only meant for sequences the service-time rule left alone.
    """
    if len(seq.order) < 3:
        return seq, False
    head, tail = volume_ratio_parts(seq.order, bundle, params.p)
    if _should_reverse(head, tail, params.eta):
        return _reversed(seq, "reversed: volume"), True
    return seq, False


def is_valid(order: Sequence[str], bundle: RouteBundle) -> bool:
    return bool(order) and order[0] == bundle.station_id and sorted(order) == list(bundle.stop_ids)


def zone_sort_fallback(order: Sequence[str], bundle: RouteBundle) -> List[str]:
    """Station, then every dropoff stably sorted by natural zone label order."""
    station = bundle.station_id
    seen = set()
    body = []
    for s in order:
        if s in bundle.stops and s != station and s not in seen:
            seen.add(s)
            body.append(s)
    body.extend(s for s in bundle.dropoff_ids() if s not in seen)

    def key(s):
        z = bundle.stops[s].zone
        return (1, ()) if z is None else (0, natural_key(z.raw))

    return [station] + sorted(body, key=key)


def validate_or_fallback(seq: PredictedSequence, bundle: RouteBundle) -> PredictedSequence:
    if is_valid(seq.order, bundle):
        return seq
    return seq.with_order(zone_sort_fallback(seq.order, bundle), "fallback: zone sort")


def postprocess(
    seq: PredictedSequence, bundle: RouteBundle, params: PostProcessParams = PostProcessParams()
) -> PredictedSequence:
    """Service-time reversal, then (if not reversed) volume reversal, then the validity check."""
    if is_valid(seq.order, bundle):
        seq, flipped = reverse_by_service_time(seq, bundle, params)
        if not flipped:
            seq, _ = reverse_by_volume(seq, bundle, params)
    return validate_or_fallback(seq, bundle)
