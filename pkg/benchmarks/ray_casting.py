"""Compare the jit-compiled and pure-numpy ray-casting kernels.

Run twice to see both paths end to end, or rely on this script's in-process
comparison, which calls both implementations directly:

    python3 benchmarks/ray_casting.py
    NAVEX_NO_NUMBA=1 python3 benchmarks/ray_casting.py
"""
import time

import numpy as np

from navex import kernels


def bench(fn, ox, oy, angles, segments, max_range, repeats=50):
    fn(ox, oy, angles, segments, max_range)  # warm-up / compile
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn(ox, oy, angles, segments, max_range)
    return (time.perf_counter() - t0) / repeats * 1e3


def main():
    rng = np.random.default_rng(0)
    angles = np.linspace(-np.pi, np.pi, 660)
    print(f"active cast_rays path: {'numba' if kernels.USE_NUMBA else 'numpy'}")
    print(f"{'segments':>10} {'numpy ms':>10} {'loop ms':>10} {'speedup':>8}")
    for n_segments in (8, 64, 256, 1024):
        segments = rng.uniform(-20, 20, size=(n_segments, 4))
        t_numpy = bench(kernels._cast_rays_numpy, 0.0, 0.0, angles,
                        segments, 50.0)
        loop = (kernels._cast_rays_jit if kernels.USE_NUMBA
                else kernels._cast_rays_loop)
        t_loop = bench(loop, 0.0, 0.0, angles, segments, 50.0)
        a = kernels._cast_rays_numpy(0.0, 0.0, angles, segments, 50.0)
        b = loop(0.0, 0.0, angles, segments, 50.0)
        assert np.allclose(a, b), "kernel outputs diverged"
        print(f"{n_segments:>10} {t_numpy:>10.3f} {t_loop:>10.3f} "
              f"{t_numpy / t_loop:>7.1f}x")


if __name__ == "__main__":
    main()
