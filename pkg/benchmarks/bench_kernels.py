#!/usr/bin/env python3
"""Benchmark the jitted convolution kernels against the pure-numpy path.

Run:  python3 benchmarks/bench_kernels.py
The numpy path is also what you get with FREEFISTA_DISABLE_NUMBA=1.
"""

import time

import numpy as np

from freefista._kernels import HAVE_NUMBA, conv2d_reflect, conv2d_reflect_adjoint
from freefista import FreeFistaConfig, free_fista, make_poisson_sr_instance, poisson_problem


def _time(fn, repeat=30):
    fn()  # warm-up / JIT
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def bench_kernels():
    rng = np.random.default_rng(0)
    print(f"numba available: {HAVE_NUMBA}")
    print(f"{'size':>10} {'kernel':>8} {'numpy fwd':>12} {'numba fwd':>12} "
          f"{'numpy adj':>12} {'numba adj':>12} {'speedup':>8}")
    for side in (64, 128, 256):
        for ksize in (5, 9, 13):
            img = rng.standard_normal((side, side))
            ker = rng.standard_normal((ksize, ksize))
            t_np_f = _time(lambda: conv2d_reflect(img, ker, use_numba=False))
            t_nb_f = _time(lambda: conv2d_reflect(img, ker, use_numba=True))
            t_np_a = _time(lambda: conv2d_reflect_adjoint(img, ker, use_numba=False))
            t_nb_a = _time(lambda: conv2d_reflect_adjoint(img, ker, use_numba=True))
            speed = (t_np_f + t_np_a) / max(t_nb_f + t_nb_a, 1e-12)
            print(f"{side:>7}^2 {ksize:>5}^2 {t_np_f * 1e3:>10.3f}ms {t_nb_f * 1e3:>10.3f}ms "
                  f"{t_np_a * 1e3:>10.3f}ms {t_nb_a * 1e3:>10.3f}ms {speed:>7.2f}x")


def bench_solver():
    inst = make_poisson_sr_instance(32, 2, 0.5, 0.02, seed=1, psf_size=9, psf_sigma=1.5)
    prob = poisson_problem(inst)
    x0 = np.random.default_rng(1).uniform(0.0, 1.0, inst.n)
    cfg = FreeFistaConfig(epsilon=0.0, L0=prob.lipschitz_hint, max_total_iterations=300)
    t0 = time.perf_counter()
    free_fista(prob, x0, cfg)
    print(f"\n300-iteration deconvolution solve: {time.perf_counter() - t0:.2f}s "
          f"({'numba' if HAVE_NUMBA else 'numpy'} kernels)")


if __name__ == "__main__":
    bench_kernels()
    bench_solver()
