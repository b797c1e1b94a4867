import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import build_bundle, dropoff_ids
from routeseq.scorer import (
    BatchScore,
    ScoringError,
    erp,
    normalized_times,
    score_batch,
    score_histogram,
    score_route,
    sequence_deviation,
)


def _half_bundle():
    # dropoff-to-dropoff times 1, station pairs 2: T_max = 2, so t_hat = 0.5 among a, b, c
    T = np.ones((4, 4))
    T[0, :] = T[:, 0] = 2.0
    np.fill_diagonal(T, 0.0)
    return build_bundle(zones=["A-1.1A"] * 3, times=T)


def test_identity_scores_zero():
    b = _half_bundle()
    r = score_route(("S", "A", "B", "C"), ("S", "A", "B", "C"), b)
    assert (r.score, r.seq_deviation, r.erp_total, r.erp_edits) == (0.0, 0.0, 0.0, 0)


def test_swap_example():
    b = _half_bundle()
    r = score_route(("S", "A", "B", "C"), ("S", "B", "A", "C"), b)
    assert r.seq_deviation == pytest.approx(1.0)
    assert r.erp_total == pytest.approx(1.0)
    assert r.erp_edits == 2
    assert r.score == pytest.approx(0.5)


def test_reversal_deviation():
    b = _half_bundle()
    r = score_route(("S", "A", "B", "C"), ("S", "C", "B", "A"), b)
    assert r.seq_deviation == pytest.approx(4 / 3)
    assert r.score > 0


def test_single_dropoff_scores_zero():
    b = build_bundle(zones=["A-1.1A"])
    assert score_route(("S", "A"), ("S", "A"), b).score == 0.0
    assert sequence_deviation(np.array([3]), np.array([3])) == 0.0


def test_precondition_errors():
    b = _half_bundle()
    with pytest.raises(ScoringError, match="predicted"):
        score_route(("S", "A", "B", "C"), ("A", "S", "B", "C"), b)
    with pytest.raises(ScoringError, match="actual"):
        score_route(("S", "A", "B"), ("S", "A", "B", "C"), b)


def _erp_oracle(t, gap=1.0):
    """Minimum over every monotone alignment path, enumerated recursively."""
    n, m = t.shape
    best = math.inf

    def walk(i, j, acc):
        nonlocal best
        if i == n and j == m:
            best = min(best, acc)
            return
        if i < n and j < m:
            walk(i + 1, j + 1, acc + t[i, j])
        if i < n:
            walk(i + 1, j, acc + gap)
        if j < m:
            walk(i, j + 1, acc + gap)

    walk(0, 0, 0.0)
    return best


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**31 - 1))
def test_erp_matches_exhaustive_alignment(n, seed):
    rng = np.random.default_rng(seed)
    T = rng.uniform(0, 100, (n + 1, n + 1))
    np.fill_diagonal(T, 0)
    b = build_bundle(zones=["A-1.1A"] * n, times=T)
    a = b.indices(dropoff_ids(n))
    p = b.indices(list(rng.permutation(dropoff_ids(n))))
    tn = normalized_times(b)
    total, edits = erp(a, p, tn)
    assert total == pytest.approx(_erp_oracle(tn[np.ix_(a, p)]), abs=1e-12)
    assert total <= 2 * n
    assert 0 <= edits <= 2 * n


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 9), st.integers(0, 2**31 - 1), st.floats(0.01, 1000))
def test_scaling_invariance(n, seed, factor):
    rng = np.random.default_rng(seed)
    T = rng.uniform(1, 50, (n + 1, n + 1))
    np.fill_diagonal(T, 0)
    ids = dropoff_ids(n)
    actual = ("S", *ids)
    pred = ("S", *rng.permutation(ids))
    r1 = score_route(actual, pred, build_bundle(zones=["A-1.1A"] * n, times=T))
    r2 = score_route(actual, pred, build_bundle(zones=["A-1.1A"] * n, times=T * factor))
    assert r1.seq_deviation == r2.seq_deviation
    assert r1.erp_total == pytest.approx(r2.erp_total, rel=1e-9)
    assert (r1.score == 0) == (pred == actual)


def test_nonidentical_scores_positive():
    b = _half_bundle()
    for perm in itertools.permutations("ABC"):
        r = score_route(("S", "A", "B", "C"), ("S", *perm), b)
        assert (r.score == 0) == (perm == ("A", "B", "C"))


def test_histogram():
    assert score_histogram([0.0, 0.0]) == [(0.0, 0.01, 2)]
    rows = score_histogram([0.0, 0.005, 0.015, 0.03])
    assert [c for _, _, c in rows] == [2, 1, 0, 1]
    assert rows[-1][:2] == (0.03, 0.04)
    assert score_histogram([]) == []


def test_batch_isolates_errors():
    b = _half_bundle()
    good = ("S", "A", "B", "C")
    pairs = []
    for i in range(10):
        bi = build_bundle(route_id=f"R{i}", zones=["A-1.1A"] * 3, times=b.travel_time[np.ix_([3, 0, 1, 2], [3, 0, 1, 2])])
        pred = ("S", "A", "B") if i == 4 else ("S", "B", "A", "C")
        pairs.append((good, pred, bi))
    with pytest.warns(RuntimeWarning, match="1 route"):
        bs = score_batch(pairs)
    assert len(bs.reports) == 9 and list(bs.errors) == ["R4"]
    assert bs.mean == pytest.approx(0.5)
    with pytest.raises(ScoringError):
        score_batch([])


def test_batch_summary_identical():
    bs = BatchScore([])
    assert bs.mean is None and bs.summary_line() == "routes=0 errors=0"
