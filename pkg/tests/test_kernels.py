import numpy as np
import pytest

from routeseq import kernels

needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("n", [2, 3, 5, 8, 11])
def test_held_karp_backends_agree(n):
    rng = np.random.default_rng(n)
    c = rng.integers(0, 1000, (n, n)).astype(np.int64)
    np.fill_diagonal(c, 0)
    assert np.array_equal(kernels.held_karp_cost_to_go_np(c), kernels.held_karp_cost_to_go_nb(c))


@needs_numba
@pytest.mark.parametrize("shape", [(1, 1), (3, 3), (7, 4), (40, 40)])
def test_erp_backends_bitwise_equal(shape):
    rng = np.random.default_rng(sum(shape))
    t = rng.random(shape)
    d_np = kernels.erp_table_np(t, 1.0)
    d_nb = kernels.erp_table_nb(t, 1.0)
    assert np.array_equal(d_np, d_nb)
    assert kernels.erp_traceback_py(d_np, t, 1.0) == kernels.erp_traceback_nb(d_nb, t, 1.0)


def test_held_karp_full_mask_row_is_return_arc():
    c = np.array([[0, 1, 2], [3, 0, 4], [5, 6, 0]], dtype=np.int64)
    h = kernels.held_karp_cost_to_go_np(c)
    assert h[0b11, 1] == 3 and h[0b11, 2] == 5
    # at node 1 having visited {1}: go to 2 then home
    assert h[0b01, 1] == 4 + 5


def test_erp_table_borders():
    t = np.zeros((2, 3))
    d = kernels.erp_table_np(t, 1.0)
    assert d[:, 0].tolist() == [0, 1, 2]
    assert d[0, :].tolist() == [0, 1, 2, 3]
    assert d[2, 3] == 1.0  # two free matches plus one gap


def test_backend_name():
    assert kernels.BACKEND in ("numba", "numpy")
