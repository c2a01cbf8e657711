"""Hot numeric kernels: direct 2-D convolution with reflective boundary.

The convolution (and its exact adjoint) is the only loop-bound inner
operation in the package; everything else is BLAS or vectorized numpy.
Kernels are numba-jitted when numba is importable, with a pure-numpy
fallback selected either automatically or by setting the environment
variable ``FREEFISTA_DISABLE_NUMBA=1``.  ``benchmarks/bench_kernels.py``
compares the two paths.
"""

from __future__ import annotations

import os

import numpy as np

DISABLE_ENV = "FREEFISTA_DISABLE_NUMBA"


def _env_disabled() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() in ("1", "true", "yes")


try:
    if _env_disabled():
        raise ImportError("numba disabled via " + DISABLE_ENV)
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        # identity decorator so the jitted names stay importable
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


def reflect_pad_indices(n: int, radius: int) -> np.ndarray:
    """Source indices of a 1-D mirror padding (edge sample not repeated)."""
    if radius >= n:
        raise ValueError(f"pad radius {radius} too large for size {n}")
    return np.pad(np.arange(n), radius, mode="reflect")


@njit(cache=True)
def _conv_gather_njit(pad, kernel, out):  # pragma: no cover - numba path
    n1, n2 = out.shape
    k1, k2 = kernel.shape
    for i in range(n1):
        for j in range(n2):
            acc = 0.0
            for u in range(k1):
                for v in range(k2):
                    acc += kernel[u, v] * pad[i + u, j + v]
            out[i, j] = acc


@njit(cache=True)
def _conv_scatter_njit(vin, kernel, pad_grad):  # pragma: no cover - numba path
    n1, n2 = vin.shape
    k1, k2 = kernel.shape
    for i in range(n1):
        for j in range(n2):
            w = vin[i, j]
            for u in range(k1):
                for v in range(k2):
                    pad_grad[i + u, j + v] += kernel[u, v] * w


def _conv_gather_numpy(pad, kernel, out):
    n1, n2 = out.shape
    k1, k2 = kernel.shape
    out[:] = 0.0
    for u in range(k1):
        for v in range(k2):
            out += kernel[u, v] * pad[u : u + n1, v : v + n2]


def _conv_scatter_numpy(vin, kernel, pad_grad):
    n1, n2 = vin.shape
    k1, k2 = kernel.shape
    for u in range(k1):
        for v in range(k2):
            pad_grad[u : u + n1, v : v + n2] += kernel[u, v] * vin


def _check_kernel(kernel: np.ndarray) -> tuple[int, int]:
    if kernel.ndim != 2 or kernel.shape[0] % 2 == 0 or kernel.shape[1] % 2 == 0:
        raise ValueError("convolution kernel must be 2-D with odd side lengths")
    return kernel.shape[0] // 2, kernel.shape[1] // 2


def conv2d_reflect(img: np.ndarray, kernel: np.ndarray, use_numba: bool | None = None) -> np.ndarray:
    """Direct 2-D correlation of ``img`` with ``kernel``, mirror boundary."""
    r1, r2 = _check_kernel(kernel)
    img = np.ascontiguousarray(img, dtype=np.float64)
    kernel = np.ascontiguousarray(kernel, dtype=np.float64)
    ir = reflect_pad_indices(img.shape[0], r1)
    ic = reflect_pad_indices(img.shape[1], r2)
    pad = np.ascontiguousarray(img[np.ix_(ir, ic)])
    out = np.empty_like(img)
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and HAVE_NUMBA:
        _conv_gather_njit(pad, kernel, out)
    else:
        _conv_gather_numpy(pad, kernel, out)
    return out


def conv2d_reflect_adjoint(vin: np.ndarray, kernel: np.ndarray, use_numba: bool | None = None) -> np.ndarray:
    """Exact adjoint of :func:`conv2d_reflect` (scatter + boundary fold)."""
    r1, r2 = _check_kernel(kernel)
    vin = np.ascontiguousarray(vin, dtype=np.float64)
    kernel = np.ascontiguousarray(kernel, dtype=np.float64)
    n1, n2 = vin.shape
    pad_grad = np.zeros((n1 + 2 * r1, n2 + 2 * r2))
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and HAVE_NUMBA:
        _conv_scatter_njit(vin, kernel, pad_grad)
    else:
        _conv_scatter_numpy(vin, kernel, pad_grad)
    # fold padded rows/columns back onto their mirror sources
    ir = reflect_pad_indices(n1, r1)
    ic = reflect_pad_indices(n2, r2)
    rows = np.zeros((n1, n2 + 2 * r2))
    np.add.at(rows, ir, pad_grad)
    out = np.zeros((n2, n1))
    np.add.at(out, ic, rows.T)
    return np.ascontiguousarray(out.T)
