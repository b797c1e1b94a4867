"""Hot numeric kernels with numba and pure-numpy implementations.

Every kernel has a ``*_nb`` (numba) and ``*_np`` (numpy) variant with identical
floating-point semantics. The public names dispatch on ``USE_NUMBA``; the
benchmark in ``benchmarks/`` calls both variants directly.
"""

import numpy as np

from ._jit import HAVE_NUMBA, USE_NUMBA, njit

# Large enough to dominate any real tour, small enough that INF + cost never wraps.
INF = np.int64(2**62)


# --------------------------------------------------------------------------
# Held-Karp cost-to-go table
# --------------------------------------------------------------------------


def held_karp_cost_to_go_np(c):
    """Backward Held-Karp table over nodes ``1..n-1``.

    ``h[mask, j]`` is the cheapest way to finish a tour that has already
    visited the node set ``mask`` (bit ``j-1`` for node ``j``) and currently
    stands at ``j``: visit every remaining node once, then return to node 0.
    Requires ``n >= 2`` and an int64 cost matrix.
    """
    n = c.shape[0]
    m = n - 1
    full = (1 << m) - 1
    h = np.full((1 << m, n), INF, dtype=np.int64)
    h[full, 1:] = c[1:, 0]
    nodes = np.arange(1, n)
    bits = np.left_shift(1, nodes - 1)
    for mask in range(full - 1, 0, -1):
        inside = (mask & bits) != 0
        js = nodes[inside]
        ks = nodes[~inside]
        nxt = h[mask | bits[~inside], ks]
        h[mask, js] = (c[np.ix_(js, ks)] + nxt[None, :]).min(axis=1)
    return h


def _held_karp_cost_to_go_py(c):
    n = c.shape[0]
    m = n - 1
    full = (1 << m) - 1
    h = np.full((1 << m, n), INF, dtype=np.int64)
    for j in range(1, n):
        h[full, j] = c[j, 0]
    for mask in range(full - 1, 0, -1):
        for j in range(1, n):
            if not (mask >> (j - 1)) & 1:
                continue
            best = INF
            for k in range(1, n):
                if (mask >> (k - 1)) & 1:
                    continue
                v = c[j, k] + h[mask | (1 << (k - 1)), k]
                if v < best:
                    best = v
            h[mask, j] = best
    return h


# --------------------------------------------------------------------------
# ERP alignment table and traceback
# --------------------------------------------------------------------------


def erp_table_np(t, g):
    """ERP dynamic-programming table, filled one anti-diagonal at a time.

    ``t[i, j]`` is the substitution cost of aligning element ``i`` of the first
    sequence with element ``j`` of the second; ``g`` is the gap cost.
    """
    n, m = t.shape
    D = np.empty((n + 1, m + 1), dtype=np.float64)
    D[:, 0] = np.arange(n + 1) * g
    D[0, :] = np.arange(m + 1) * g
    for d in range(2, n + m + 1):
        lo = max(1, d - m)
        hi = min(n, d - 1)
        if lo > hi:
            continue
        i = np.arange(lo, hi + 1)
        j = d - i
        diag = D[i - 1, j - 1] + t[i - 1, j - 1]
        up = D[i - 1, j] + g
        left = D[i, j - 1] + g
        D[i, j] = np.minimum(np.minimum(diag, up), left)
    return D


def _erp_table_py(t, g):
    n, m = t.shape
    D = np.empty((n + 1, m + 1), dtype=np.float64)
    for i in range(n + 1):
        D[i, 0] = i * g
    for j in range(m + 1):
        D[0, j] = j * g
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            diag = D[i - 1, j - 1] + t[i - 1, j - 1]
            up = D[i - 1, j] + g
            left = D[i, j - 1] + g
            best = diag
            if up < best:
                best = up
            if left < best:
                best = left
            D[i, j] = best
    return D


def erp_traceback_py(D, t, g):
    """Count the positive-cost operations on the match-preferring optimal path."""
    i = D.shape[0] - 1
    j = D.shape[1] - 1
    edits = 0
    while i > 0 or j > 0:
        if i > 0 and j > 0 and D[i, j] == D[i - 1, j - 1] + t[i - 1, j - 1]:
            if t[i - 1, j - 1] > 0:
                edits += 1
            i -= 1
            j -= 1
        elif i > 0 and D[i, j] == D[i - 1, j] + g:
            if g > 0:
                edits += 1
            i -= 1
        else:
            if g > 0:
                edits += 1
            j -= 1
    return edits


if HAVE_NUMBA:
    held_karp_cost_to_go_nb = njit(_held_karp_cost_to_go_py)
    erp_table_nb = njit(_erp_table_py)
    erp_traceback_nb = njit(erp_traceback_py)
else:  # pragma: no cover
    held_karp_cost_to_go_nb = None
    erp_table_nb = None
    erp_traceback_nb = None

if USE_NUMBA:
    held_karp_cost_to_go = held_karp_cost_to_go_nb
    erp_table = erp_table_nb
    erp_traceback = erp_traceback_nb
else:
    held_karp_cost_to_go = held_karp_cost_to_go_np
    erp_table = erp_table_np
    erp_traceback = erp_traceback_py

BACKEND = "numba" if USE_NUMBA else "numpy"
