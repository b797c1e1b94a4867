"""Sequence dissimilarity score: rank deviation times mean ERP edit cost.

For actual order ``A`` and predicted order ``B`` over ``n`` dropoffs (station
removed)::

    SD    = 2 / (n (n - 1)) * sum_i |rank_A(B_i) - rank_A(B_{i-1}) - 1|
    ERP   = edit distance with real penalty; substitution cost is the
            travel time normalised by the route's largest travel time,
            gap cost is 1
    score = SD * ERP_total / ERP_edits      (0 when there are no edits)
"""

from __future__ import annotations

import math
import statistics
import warnings
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .data import RouteBundle

GAP_PENALTY = 1.0
HIST_BIN_WIDTH = 0.01


class ScoringError(ValueError):
    pass


@dataclass(frozen=True)
class ScoreReport:
    route_id: str
    score: float
    seq_deviation: float
    erp_total: float
    erp_edits: int


def _strip_station(seq: Sequence[str], bundle: RouteBundle, which: str) -> List[str]:
    station = bundle.station_id
    seq = list(seq)
    if not seq or seq[0] != station:
        raise ScoringError(f"route {bundle.route_id}: {which} sequence must start at the station")
    rest = seq[1:]
    if sorted(rest) != bundle.dropoff_ids():
        raise ScoringError(f"route {bundle.route_id}: {which} sequence is not a permutation of the route's stops")
    return rest


def sequence_deviation(actual_idx: np.ndarray, predicted_idx: np.ndarray) -> float:
    n = len(actual_idx)
    if n <= 1:
        return 0.0
    rank = np.empty(actual_idx.max() + 1, dtype=np.int64)
    rank[actual_idx] = np.arange(1, n + 1)
    r = rank[predicted_idx]
    return 2.0 / (n * (n - 1)) * float(np.abs(np.diff(r) - 1).sum())


def normalized_times(bundle: RouteBundle) -> np.ndarray:
    T = bundle.travel_time
    tmax = float(T.max())
    return T / (tmax if tmax > 0 else 1.0)


def erp(actual_idx: np.ndarray, predicted_idx: np.ndarray, tnorm: np.ndarray, gap: float = GAP_PENALTY):
    """Return ``(erp_total, erp_edits)`` for two index sequences."""
    t = np.ascontiguousarray(tnorm[np.ix_(actual_idx, predicted_idx)])
    D = kernels.erp_table(t, gap)
    edits = kernels.erp_traceback(D, t, gap)
    return float(D[-1, -1]), int(edits)


def score_route(actual: Sequence[str], predicted: Sequence[str], bundle: RouteBundle) -> ScoreReport:
    a = _strip_station(actual, bundle, "actual")
    b = _strip_station(predicted, bundle, "predicted")
    if not a:
        raise ScoringError(f"route {bundle.route_id}: no dropoffs to score")
    ai = bundle.indices(a)
    bi = bundle.indices(b)
    if np.array_equal(ai, bi):
        return ScoreReport(bundle.route_id, 0.0, 0.0, 0.0, 0)
    sd = sequence_deviation(ai, bi)
    total, edits = erp(ai, bi, normalized_times(bundle))
    score = sd * total / edits if edits else 0.0
    return ScoreReport(bundle.route_id, score, sd, total, edits)


@dataclass
class BatchScore:
    reports: List[ScoreReport]
    errors: Dict[str, str] = field(default_factory=dict)

    @property
    def scores(self) -> List[float]:
        return [r.score for r in self.reports]

    @property
    def mean(self) -> Optional[float]:
        s = self.scores
        return math.fsum(s) / len(s) if s else None

    @property
    def median(self) -> Optional[float]:
        return statistics.median(self.scores) if self.reports else None

    @property
    def max(self) -> Optional[float]:
        return max(self.scores) if self.reports else None

    def histogram(self, width: float = HIST_BIN_WIDTH) -> List[Tuple[float, float, int]]:
        return score_histogram(self.scores, width)

    def summary_line(self) -> str:
        if not self.reports:
            return f"routes=0 errors={len(self.errors)}"
        return (
            f"routes={len(self.reports)} errors={len(self.errors)} "
            f"mean={self.mean:.6f} median={self.median:.6f} max={self.max:.6f}"
        )


def score_histogram(scores: Sequence[float], width: float = HIST_BIN_WIDTH) -> List[Tuple[float, float, int]]:
    """``(bin_low, bin_high, count)`` rows covering ``[0, max score]``."""
    if not scores:
        return []
    s = np.asarray(scores, dtype=np.float64)
    nbins = int(math.floor(s.max() / width)) + 1
    idx = np.minimum(np.floor(s / width).astype(np.int64), nbins - 1)
    counts = np.bincount(idx, minlength=nbins)
    return [(round(k * width, 10), round((k + 1) * width, 10), int(counts[k])) for k in range(nbins)]


def score_batch(pairs: Iterable[Tuple[Sequence[str], Sequence[str], RouteBundle]]) -> BatchScore:
    """Score many routes; failing routes are recorded in ``errors`` and skipped."""
    pairs = list(pairs)
    if not pairs:
        raise ScoringError("score_batch needs at least one route")
    reports = []
    errors = {}
    for actual, predicted, bundle in sorted(pairs, key=lambda p: p[2].route_id):
        try:
            reports.append(score_route(actual, predicted, bundle))
        except (ScoringError, KeyError, ValueError) as exc:
            errors[bundle.route_id] = str(exc)
    if errors:
        warnings.warn(f"{len(errors)} route(s) could not be scored", RuntimeWarning, stacklevel=2)
    return BatchScore(reports, errors)
