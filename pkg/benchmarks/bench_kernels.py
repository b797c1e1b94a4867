"""Compare the numba and pure-numpy variants of the hot kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--hk-nodes 14] [--erp-len 150]

Each kernel is run once untimed (JIT compile / warm caches), then ``repeat``
times; the best wall time is reported along with a check that both variants
agree bit for bit.
"""

import argparse
import time

import numpy as np

from routeseq import kernels


def best_time(fn, args, repeat):
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--hk-nodes", type=int, default=14, help="Held-Karp instance size")
    ap.add_argument("--erp-len", type=int, default=150, help="ERP sequence length")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if kernels.held_karp_cost_to_go_nb is None:
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(args.seed)
    c = rng.integers(0, 10**6, (args.hk_nodes, args.hk_nodes)).astype(np.int64)
    np.fill_diagonal(c, 0)
    t = rng.uniform(0, 1, (args.erp_len, args.erp_len))

    cases = [
        ("held_karp", (c,), kernels.held_karp_cost_to_go_nb, kernels.held_karp_cost_to_go_np),
        ("erp_table", (t, 1.0), kernels.erp_table_nb, kernels.erp_table_np),
    ]
    print(f"{'kernel':<12}{'numba s':>12}{'numpy s':>12}{'speedup':>10}  identical")
    for name, a, nb, npf in cases:
        t_nb, out_nb = best_time(nb, a, args.repeat)
        t_np, out_np = best_time(npf, a, args.repeat)
        same = np.array_equal(out_nb, out_np)
        print(f"{name:<12}{t_nb:>12.5f}{t_np:>12.5f}{t_np / t_nb:>9.1f}x  {same}")

    D = kernels.erp_table_nb(t, 1.0)
    t_nb, e_nb = best_time(kernels.erp_traceback_nb, (D, t, 1.0), args.repeat)
    t_py, e_py = best_time(kernels.erp_traceback_py, (D, t, 1.0), args.repeat)
    print(f"{'traceback':<12}{t_nb:>12.5f}{t_py:>12.5f}{t_py / t_nb:>9.1f}x  {e_nb == e_py}")


if __name__ == "__main__":
    main()
