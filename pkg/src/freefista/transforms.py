"""Orthonormal Haar transforms, block down-sampling and thresholding maps."""

from __future__ import annotations

import numpy as np

from ._kernels import conv2d_reflect, conv2d_reflect_adjoint

_SQRT2 = np.sqrt(2.0)


def soft_threshold(z: np.ndarray, t: float) -> np.ndarray:
    """Componentwise minimizer of t*|w| + (w - z)^2 / 2."""
    return np.sign(z) * np.maximum(np.abs(z) - t, 0.0)


def soft_threshold_nonneg(z: np.ndarray, t: float) -> np.ndarray:
    """One-sided soft threshold: prox of t*|w| plus the w >= 0 constraint."""
    return np.maximum(z - t, 0.0)


def _check_levels(size: int, levels: int) -> None:
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if size % (1 << levels) != 0:
        raise ValueError(f"size {size} is not a multiple of 2^{levels}")


def _haar_fwd_1d(v: np.ndarray) -> np.ndarray:
    even, odd = v[0::2], v[1::2]
    return np.concatenate(((even + odd) / _SQRT2, (even - odd) / _SQRT2))


def _haar_inv_1d(v: np.ndarray) -> np.ndarray:
    half = v.size // 2
    a, d = v[:half], v[half:]
    out = np.empty_like(v)
    out[0::2] = (a + d) / _SQRT2
    out[1::2] = (a - d) / _SQRT2
    return out


def _haar_fwd_rows(block: np.ndarray) -> np.ndarray:
    even, odd = block[:, 0::2], block[:, 1::2]
    return np.hstack(((even + odd) / _SQRT2, (even - odd) / _SQRT2))


def _haar_inv_rows(block: np.ndarray) -> np.ndarray:
    half = block.shape[1] // 2
    a, d = block[:, :half], block[:, half:]
    out = np.empty_like(block)
    out[:, 0::2] = (a + d) / _SQRT2
    out[:, 1::2] = (a - d) / _SQRT2
    return out


def haar_forward(x: np.ndarray, levels: int) -> np.ndarray:
    """Multi-level orthonormal Haar analysis of a 1-D signal or 2-D image."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        _check_levels(x.size, levels)
        out = x.copy()
        size = x.size
        for _ in range(levels):
            out[:size] = _haar_fwd_1d(out[:size])
            size //= 2
        return out
    if x.ndim == 2:
        _check_levels(x.shape[0], levels)
        _check_levels(x.shape[1], levels)
        out = x.copy()
        s1, s2 = x.shape
        for _ in range(levels):
            block = _haar_fwd_rows(out[:s1, :s2])
            out[:s1, :s2] = _haar_fwd_rows(block.T).T
            s1 //= 2
            s2 //= 2
        return out
    raise ValueError("haar transform expects a 1-D or 2-D array")


def haar_inverse(x: np.ndarray, levels: int) -> np.ndarray:
    """Inverse of :func:`haar_forward` (exact, the transform is orthogonal)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        _check_levels(x.size, levels)
        out = x.copy()
        size = x.size >> (levels - 1)
        for _ in range(levels):
            out[:size] = _haar_inv_1d(out[:size])
            size *= 2
        return out
    if x.ndim == 2:
        _check_levels(x.shape[0], levels)
        _check_levels(x.shape[1], levels)
        out = x.copy()
        s1, s2 = x.shape[0] >> (levels - 1), x.shape[1] >> (levels - 1)
        for _ in range(levels):
            block = _haar_inv_rows(out[:s1, :s2].T).T
            out[:s1, :s2] = _haar_inv_rows(block)
            s1 *= 2
            s2 *= 2
        return out
    raise ValueError("haar transform expects a 1-D or 2-D array")


def haar_transform(x: np.ndarray, levels: int, direction: str) -> np.ndarray:
    """Dispatch to the forward or inverse multi-level Haar transform."""
    if direction == "forward":
        return haar_forward(x, levels)
    if direction == "inverse":
        return haar_inverse(x, levels)
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def block_downsample(img: np.ndarray, q: int) -> np.ndarray:
    """q x q block averaging; maps an (n1, n2) image to (n1/q, n2/q)."""
    n1, n2 = img.shape
    if n1 % q or n2 % q:
        raise ValueError(f"image sides {img.shape} not divisible by q={q}")
    return img.reshape(n1 // q, q, n2 // q, q).mean(axis=(1, 3))


def block_downsample_adjoint(v: np.ndarray, q: int) -> np.ndarray:
    """Adjoint of q x q block averaging: replicate each entry, divide by q^2."""
    return np.repeat(np.repeat(v, q, axis=0), q, axis=1) / (q * q)


def gaussian_psf(size: int, sigma: float) -> np.ndarray:
    """Normalized truncated Gaussian point spread function (odd size)."""
    if size % 2 == 0:
        raise ValueError("PSF size must be odd")
    ax = np.arange(size) - size // 2
    g = np.exp(-0.5 * (ax / sigma) ** 2)
    k = np.outer(g, g)
    return k / k.sum()


__all__ = [
    "soft_threshold",
    "soft_threshold_nonneg",
    "haar_forward",
    "haar_inverse",
    "haar_transform",
    "block_downsample",
    "block_downsample_adjoint",
    "gaussian_psf",
    "conv2d_reflect",
    "conv2d_reflect_adjoint",
]
