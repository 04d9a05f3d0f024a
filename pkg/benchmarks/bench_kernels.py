"""Compare the compiled and pure-numpy kernels on the hot paths.

Run with ``python3 benchmarks/bench_kernels.py``. Both paths are called directly,
so the environment flag does not matter here.
"""

import time

import numpy as np

from pencilspec import Pencil, Problem, SearchRegion, find_eigenvalues
from pencilspec import _kernels
from pencilspec.chardet import _kernel_args


def _best(fn, repeat=5):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    rng = np.random.default_rng(0)
    problem = Problem(Pencil(-3, 2), rng.normal(size=(2, 4)) + 1j * rng.normal(size=(2, 4)))
    args = _kernel_args(problem)
    lams = rng.uniform(-10, 10, 100_000) + 1j * rng.uniform(-40, 40, 100_000)

    _kernels.warmup()
    rows = []
    t_jit = _best(lambda: _kernels.delta_batch_jit(lams, *args, True))
    t_np = _best(lambda: _kernels.delta_batch_numpy(lams, *args, True))
    rows.append(("delta_batch, 1e5 points", t_jit, t_np))

    z0, z1 = complex(-10, -40), complex(10, -40)
    t_jit = _best(lambda: _kernels.segment_phase_jit(z0, z1, 64, 200_000, *args))
    t_np = _best(lambda: _kernels.segment_phase_problem_numpy(z0, z1, 64, 200_000, *args))
    rows.append(("segment_phase, one edge", t_jit, t_np))

    region = SearchRegion(-10, 10, -40, 40)
    enabled = _kernels.NUMBA_ENABLED
    try:
        _kernels.NUMBA_ENABLED = True
        t_jit = _best(lambda: find_eigenvalues(problem, region), repeat=3)
        _kernels.NUMBA_ENABLED = False
        t_np = _best(lambda: find_eigenvalues(problem, region), repeat=3)
    finally:
        _kernels.NUMBA_ENABLED = enabled
    rows.append(("find_eigenvalues, default region", t_jit, t_np))

    print(f"{'kernel':36s} {'numba [s]':>11s} {'numpy [s]':>11s} {'speedup':>8s}")
    for name, a, b in rows:
        print(f"{name:36s} {a:11.5f} {b:11.5f} {b / a:8.1f}")


if __name__ == "__main__":
    main()
