import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from routeseq.tsp import (
    BudgetExceededWarning,
    brute_force_path,
    brute_force_tour,
    path_cost,
    solve_path,
    solve_tour,
    tour_cost,
)


def random_matrix(rng, n, hi=100):
    c = rng.integers(0, hi, (n, n)).astype(float)
    np.fill_diagonal(c, 0.0)
    return c


def naive_min_tour(c):
    # independent of both solver and brute_force_tour: plain Python over lists
    n = len(c)
    return min(
        sum(c[a][b] for a, b in zip((0,) + p, p + (0,))) for p in itertools.permutations(range(1, n))
    )


def test_uniform_three_nodes_lexicographic():
    c = np.ones((3, 3)) - np.eye(3)
    sol = solve_tour(c)
    assert sol.order == (0, 1, 2) and sol.cost == 3 and sol.optimal


def test_two_nodes_forced():
    c = np.array([[0, 4.5], [2.0, 0]])
    sol = solve_tour(c)
    assert sol.order == (0, 1) and sol.cost == 6.5


def test_single_node():
    assert solve_tour([[0.0]]).order == (0,)
    p = solve_path([[0.0]], 0, 0)
    assert p.order == (0,) and p.cost == 0


def test_path_uniform():
    c = np.ones((3, 3)) - np.eye(3)
    sol = solve_path(c, 0, 2)
    assert sol.order == (0, 1, 2) and sol.cost == 2


@pytest.mark.parametrize(
    "bad",
    [np.zeros((2, 3)), np.zeros((0, 0)), np.array([[0, -1.0], [1, 0]]), np.array([[0, np.inf], [1, 0]])],
)
def test_rejects_bad_matrices(bad):
    with pytest.raises(ValueError):
        solve_tour(bad)


def test_path_argument_errors():
    c = np.ones((3, 3))
    with pytest.raises(ValueError):
        solve_path(c, 1, 1)
    with pytest.raises(ValueError):
        solve_path(c, 0, 3)


def test_random_n8_matches_oracles():
    rng = np.random.default_rng(8)
    c = random_matrix(rng, 8)
    sol = solve_tour(c)
    assert sol.cost == brute_force_tour(c).cost == naive_min_tour(c.tolist())
    p = solve_path(c, 2, 5)
    assert p.cost == brute_force_path(c, 2, 5).cost
    assert p.order[0] == 2 and p.order[-1] == 5


@pytest.mark.parametrize("seed", range(25))
def test_branch_and_bound_matches_brute_force(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(3, 10))
    c = random_matrix(rng, n)
    bf = brute_force_tour(c)
    sol = solve_tour(c, method="bnb")
    assert sol.cost == bf.cost and sol.optimal
    o, d = (int(x) for x in rng.choice(n, 2, replace=False))
    assert solve_path(c, o, d, method="bnb").cost == brute_force_path(c, o, d).cost


def test_branch_and_bound_larger_instance_matches_dp():
    rng = np.random.default_rng(3)
    c = random_matrix(rng, 14, hi=1000)
    assert solve_tour(c, method="bnb").cost == solve_tour(c, method="dp").cost


def test_brute_force_guard():
    brute_force_tour(np.ones((10, 10)))
    with pytest.raises(ValueError):
        brute_force_tour(np.ones((11, 11)))
    with pytest.raises(ValueError):
        brute_force_path(np.ones((11, 11)), 0, 1)


def test_brute_force_small_uniform():
    assert brute_force_tour(np.ones((3, 3)) - np.eye(3)).cost == 3


def test_budget_expiry_returns_incumbent():
    rng = np.random.default_rng(0)
    pts = rng.random((40, 2))
    c = np.hypot(*(pts[:, None, :] - pts[None, :, :]).transpose(2, 0, 1)) * 1000
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sol = solve_tour(c, time_budget=0.05)
    assert not sol.optimal
    assert any(issubclass(w.category, BudgetExceededWarning) for w in caught)
    assert sorted(sol.order) == list(range(40)) and sol.order[0] == 0
    assert sol.cost == tour_cost(c, sol.order)


square = st.integers(2, 7).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 50), min_size=n, max_size=n), min_size=n, max_size=n)
)


@settings(max_examples=60, deadline=None)
@given(square, st.integers(1, 9))
def test_scaling_invariance_and_self_consistency(rows, factor):
    c = np.array(rows, dtype=float)
    np.fill_diagonal(c, 0)
    a = solve_tour(c)
    b = solve_tour(c * factor)
    assert a.order == b.order
    assert b.cost == pytest.approx(a.cost * factor, rel=1e-12)
    assert a.cost == tour_cost(c, a.order)
    n = len(c)
    p = solve_path(c, 0, n - 1)
    assert p.cost == path_cost(c, p.order)
    assert p.order == brute_force_path(c, 0, n - 1).order


@settings(max_examples=40, deadline=None)
@given(square)
def test_optimal_means_nothing_cheaper(rows):
    c = np.array(rows, dtype=float)
    np.fill_diagonal(c, 0)
    sol = solve_tour(c)
    assert sol.optimal
    assert sol.cost == naive_min_tour(c.tolist())
    assert sol.order == brute_force_tour(c).order
