"""Exact tour- and path-TSP over directed cost matrices.

Small instances (n <= 16) use Held-Karp dynamic programming. Larger ones use
branch-and-bound on the assignment relaxation: whenever the relaxed solution
splits into subtours, the search branches on the arcs of one subtour, so
subtour-elimination constraints are only ever introduced when violated.

Costs are rounded to micro-units and carried as int64 so that ties and
equality checks are exact. Reported ``cost`` values are recomputed from the
caller's matrix along the returned order.
"""

from __future__ import annotations

import heapq
import itertools
import time
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import kernels

SCALE = 10**6
DP_MAX_NODES = 16
BRUTE_FORCE_MAX_NODES = 10
DEFAULT_TIME_BUDGET = 30.0


class BudgetExceededWarning(UserWarning):
    """A solver hit its time budget and returned an unproven incumbent."""


@dataclass(frozen=True)
class TourSolution:
    order: Tuple[int, ...]
    cost: float
    optimal: bool
    nodes_expanded: int = 0


@dataclass(frozen=True)
class PathSolution:
    order: Tuple[int, ...]
    cost: float
    optimal: bool
    nodes_expanded: int = 0


def _as_matrix(costs) -> np.ndarray:
    c = np.asarray(costs, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {c.shape}")
    if c.shape[0] == 0:
        raise ValueError("cost matrix must have at least one node")
    if not np.all(np.isfinite(c)):
        raise ValueError("cost matrix entries must be finite")
    if np.any(c < 0):
        raise ValueError("cost matrix entries must be nonnegative")
    return c


def _scaled(c: np.ndarray) -> np.ndarray:
    ci = np.rint(c * SCALE).astype(np.int64)
    np.fill_diagonal(ci, 0)
    return ci


def tour_cost(costs, order: Sequence[int]) -> float:
    c = np.asarray(costs, dtype=np.float64)
    if len(order) < 2:
        return 0.0
    total = 0.0
    for a, b in zip(order, order[1:]):
        total += c[a, b]
    return total + c[order[-1], order[0]]


def path_cost(costs, order: Sequence[int]) -> float:
    c = np.asarray(costs, dtype=np.float64)
    total = 0.0
    for a, b in zip(order, order[1:]):
        total += c[a, b]
    return total


def _int_tour_cost(ci: np.ndarray, order: Sequence[int]) -> int:
    idx = np.asarray(order)
    return int(ci[idx, np.roll(idx, -1)].sum())


# --------------------------------------------------------------------------
# Held-Karp
# --------------------------------------------------------------------------


def _held_karp(ci: np.ndarray) -> Tuple[int, ...]:
    """Lexicographically smallest optimal tour from node 0."""
    n = ci.shape[0]
    h = kernels.held_karp_cost_to_go(ci)
    rows = ci.tolist()
    remaining = min(rows[0][k] + int(h[1 << (k - 1), k]) for k in range(1, n))
    order = [0]
    mask = 0
    cur = 0
    for _ in range(n - 1):
        for k in range(1, n):
            bit = 1 << (k - 1)
            if mask & bit:
                continue
            rest = int(h[mask | bit, k])
            if rows[cur][k] + rest == remaining:
                order.append(k)
                mask |= bit
                cur = k
                remaining = rest
                break
        else:  # pragma: no cover - exact arithmetic makes this unreachable
            raise RuntimeError("Held-Karp reconstruction failed")
    return tuple(order)


# --------------------------------------------------------------------------
# heuristics for the branch-and-bound incumbent
# --------------------------------------------------------------------------


def _nearest_neighbour(ci: np.ndarray, start: int) -> list:
    n = ci.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[start] = True
    tour = [start]
    cur = start
    for _ in range(n - 1):
        row = np.where(seen, np.iinfo(np.int64).max, ci[cur])
        cur = int(np.argmin(row))
        seen[cur] = True
        tour.append(cur)
    k = tour.index(0)
    return tour[k:] + tour[:k]


def _or_opt(ci: np.ndarray, tour: list, deadline: float) -> list:
    """Relocate segments of 1-3 nodes (orientation kept) while that lowers the cost."""
    n = len(tour)
    if n < 4:
        return tour
    c = ci.tolist()
    improved = True
    while improved and time.perf_counter() < deadline:
        improved = False
        for seg_len in (1, 2, 3):
            if seg_len > n - 2:
                break
            for i in range(1, n - seg_len + 1):
                # segment tour[i:i+seg_len], never moving node 0 at position 0
                prev = tour[i - 1]
                first = tour[i]
                last = tour[i + seg_len - 1]
                nxt = tour[(i + seg_len) % n]
                removal = c[prev][first] + c[last][nxt] - c[prev][nxt]
                rest = tour[:i] + tour[i + seg_len :]
                best_gain = 0
                best_pos = -1
                for p in range(len(rest)):
                    a = rest[p]
                    b = rest[(p + 1) % len(rest)]
                    gain = removal - (c[a][first] + c[last][b] - c[a][b])
                    if gain > best_gain:
                        best_gain = gain
                        best_pos = p
                if best_pos >= 0:
                    seg = tour[i : i + seg_len]
                    tour = rest[: best_pos + 1] + seg + rest[best_pos + 1 :]
                    improved = True
                    break
            if improved:
                break
    k = tour.index(0)
    return tour[k:] + tour[:k]


def _cycles(succ: np.ndarray) -> list:
    n = len(succ)
    seen = np.zeros(n, dtype=bool)
    out = []
    for s in range(n):
        if seen[s]:
            continue
        cyc = []
        v = s
        while not seen[v]:
            seen[v] = True
            cyc.append(v)
            v = int(succ[v])
        out.append(cyc)
    return out


def _patch(ci: np.ndarray, cycles: list) -> list:
    """Karp patching: repeatedly splice the cheapest cycle into the largest one."""
    cycles = sorted((list(c) for c in cycles), key=len, reverse=True)
    main = cycles[0]
    others = cycles[1:]
    while others:
        best = None
        m_from = np.asarray(main)
        m_to = np.roll(m_from, -1)
        for idx, cyc in enumerate(others):
            d_from = np.asarray(cyc)
            d_to = np.roll(d_from, -1)
            delta = (
                ci[m_from[:, None], d_to[None, :]]
                + ci[d_from[None, :], m_to[:, None]]
                - ci[m_from, m_to][:, None]
                - ci[d_from, d_to][None, :]
            )
            a, b = np.unravel_index(int(np.argmin(delta)), delta.shape)
            val = int(delta[a, b])
            if best is None or val < best[0]:
                best = (val, idx, int(a), int(b))
        _, idx, a, b = best
        cyc = others.pop(idx)
        # main[a] -> cyc[b+1] ... cyc[b] -> main[a+1]
        spliced = cyc[b + 1 :] + cyc[: b + 1]
        main = main[: a + 1] + spliced + main[a + 1 :]
    k = main.index(0)
    return main[k:] + main[:k]


def _better(cost, order, best_cost, best_order) -> bool:
    return cost < best_cost or (cost == best_cost and tuple(order) < tuple(best_order))


# --------------------------------------------------------------------------
# branch and bound
# --------------------------------------------------------------------------


def _assignment(base: np.ndarray, ci: np.ndarray, included, excluded):
    m = base.copy()
    for i, j in excluded:
        m[i, j] = np.inf
    for i, j in included:
        v = m[i, j]
        m[i, :] = np.inf
        m[:, j] = np.inf
        m[i, j] = v
    try:
        rows, cols = linear_sum_assignment(m)
    except ValueError:
        return None
    if not np.all(np.isfinite(m[rows, cols])):
        return None
    succ = np.empty(len(rows), dtype=np.int64)
    succ[rows] = cols
    return int(ci[rows, cols].sum()), succ


def _branch_and_bound(ci: np.ndarray, time_budget: float):
    n = ci.shape[0]
    start = time.perf_counter()
    deadline = start + time_budget

    best_order = None
    best_cost = None
    for s in range(n):
        cand = _nearest_neighbour(ci, s)
        cost = _int_tour_cost(ci, cand)
        if best_cost is None or _better(cost, cand, best_cost, best_order):
            best_cost, best_order = cost, cand
    best_order = _or_opt(ci, list(best_order), start + 0.25 * time_budget)
    best_cost = _int_tour_cost(ci, best_order)

    base = ci.astype(np.float64)
    np.fill_diagonal(base, np.inf)
    root = _assignment(base, ci, (), ())
    if root is None:  # pragma: no cover - complete digraph always has an assignment
        raise RuntimeError("assignment relaxation infeasible")

    counter = itertools.count()
    heap = [(root[0], next(counter), root[1], frozenset(), frozenset())]
    expanded = 0
    timed_out = False
    while heap:
        if time.perf_counter() > deadline:
            timed_out = True
            break
        lb, _, succ, inc, exc = heapq.heappop(heap)
        if lb >= best_cost:
            break  # best-first: everything left is at least as expensive
        expanded += 1
        cycles = _cycles(succ)
        if len(cycles) == 1:
            order = cycles[0]
            k = order.index(0)
            order = order[k:] + order[:k]
            if _better(lb, order, best_cost, best_order):
                best_cost, best_order = lb, order
            continue
        patched = _patch(ci, cycles)
        pc = _int_tour_cost(ci, patched)
        if _better(pc, patched, best_cost, best_order):
            best_cost, best_order = pc, patched

        def free_arcs(cyc):
            return [(v, int(succ[v])) for v in cyc if (v, int(succ[v])) not in inc]

        cyc = min(cycles, key=lambda c: (len(free_arcs(c)), min(c)))
        free = free_arcs(cyc)
        for t, arc in enumerate(free):
            child_inc = inc.union(free[:t])
            child_exc = exc.union((arc,))
            res = _assignment(base, ci, child_inc, child_exc)
            if res is None or res[0] >= best_cost:
                continue
            heapq.heappush(heap, (res[0], next(counter), res[1], child_inc, child_exc))

    if timed_out:
        warnings.warn(
            f"TSP branch-and-bound hit the {time_budget:g}s budget on n={n}; returning incumbent",
            BudgetExceededWarning,
            stacklevel=3,
        )
    return tuple(best_order), not timed_out, expanded


def _solve_scaled(ci: np.ndarray, time_budget: float, method: str):
    n = ci.shape[0]
    if method == "auto":
        method = "dp" if n <= DP_MAX_NODES else "bnb"
    if method == "dp":
        return _held_karp(ci), True, 1 << (n - 1)
    if method == "bnb":
        return _branch_and_bound(ci, time_budget)
    raise ValueError(f"unknown method {method!r}")


def solve_tour(costs, time_budget: float = DEFAULT_TIME_BUDGET, method: str = "auto") -> TourSolution:
    """Minimum-cost Hamiltonian cycle, reported starting at node 0.

    ``method`` is ``"auto"``, ``"dp"`` or ``"bnb"``. With ``"dp"`` equal-cost
    optima resolve to the lexicographically smallest order.
    """
    c = _as_matrix(costs)
    n = c.shape[0]
    if n == 1:
        return TourSolution((0,), 0.0, True, 0)
    order, optimal, expanded = _solve_scaled(_scaled(c), time_budget, method)
    return TourSolution(order, tour_cost(c, order), optimal, expanded)


def solve_path(
    costs, origin: int, destination: int, time_budget: float = DEFAULT_TIME_BUDGET, method: str = "auto"
) -> PathSolution:
    """Minimum-cost Hamiltonian path from ``origin`` to ``destination``.

    Reduced to a tour: the arc destination -> origin costs 0, every other arc
    leaving the destination or entering the origin costs a sentinel larger
    than any real path, and the forced arc is cut from the optimal tour.
    """
    c = _as_matrix(costs)
    n = c.shape[0]
    for v in (origin, destination):
        if not (0 <= v < n) or int(v) != v:
            raise ValueError(f"node index {v!r} out of range for n={n}")
    if n == 1:
        return PathSolution((0,), 0.0, True, 0)
    if origin == destination:
        raise ValueError("origin and destination must differ when n > 1")

    ci = _scaled(c)
    # origin becomes node 0; the rest keep their relative order, so the
    # tour solver's lexicographic tie-break carries over to paths.
    perm = [origin] + [v for v in range(n) if v != origin]
    cp = ci[np.ix_(perm, perm)].copy()
    d = perm.index(destination)
    sentinel = n * int(cp.max()) + 1
    cp[d, :] = sentinel
    cp[:, 0] = sentinel
    cp[d, 0] = 0
    np.fill_diagonal(cp, 0)
    order, optimal, expanded = _solve_scaled(cp, time_budget, method)
    order = list(order)
    if order[-1] != d:
        # an unproven incumbent may not use the forced arc; move d to the end
        order.remove(d)
        order.append(d)
    path = tuple(perm[v] for v in order)
    return PathSolution(path, path_cost(c, path), optimal, expanded)


# --------------------------------------------------------------------------
# exhaustive oracles
# --------------------------------------------------------------------------


def brute_force_tour(costs) -> TourSolution:
    """Enumerate every tour (n <= 10); ties go to the lexicographically smallest order."""
    c = _as_matrix(costs)
    n = c.shape[0]
    if n > BRUTE_FORCE_MAX_NODES:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_NODES}, got {n}")
    if n == 1:
        return TourSolution((0,), 0.0, True, 1)
    w = _scaled(c).tolist()
    best: Optional[int] = None
    best_perm = None
    count = 0
    for perm in itertools.permutations(range(1, n)):
        count += 1
        total = w[0][perm[0]] + w[perm[-1]][0]
        for a, b in zip(perm, perm[1:]):
            total += w[a][b]
        if best is None or total < best:
            best, best_perm = total, perm
    order = (0, *best_perm)
    return TourSolution(order, tour_cost(c, order), True, count)


def brute_force_path(costs, origin: int, destination: int) -> PathSolution:
    c = _as_matrix(costs)
    n = c.shape[0]
    if n > BRUTE_FORCE_MAX_NODES:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_MAX_NODES}, got {n}")
    if n == 1:
        if origin != 0 or destination != 0:
            raise ValueError("node index out of range")
        return PathSolution((0,), 0.0, True, 1)
    if origin == destination:
        raise ValueError("origin and destination must differ when n > 1")
    w = _scaled(c).tolist()
    middle = [v for v in range(n) if v not in (origin, destination)]
    best: Optional[int] = None
    best_order = None
    count = 0
    for perm in itertools.permutations(middle):
        count += 1
        order = (origin, *perm, destination)
        total = 0
        for a, b in zip(order, order[1:]):
            total += w[a][b]
        if best is None or total < best:
            best, best_order = total, order
    return PathSolution(best_order, path_cost(c, best_order), True, count)
