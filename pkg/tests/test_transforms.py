"""Haar transform, convolution kernels and sampling operators."""

import numpy as np
import pytest

from freefista._kernels import conv2d_reflect, conv2d_reflect_adjoint
from freefista.transforms import (
    block_downsample,
    block_downsample_adjoint,
    gaussian_psf,
    haar_forward,
    haar_inverse,
    haar_transform,
    soft_threshold,
    soft_threshold_nonneg,
)

SQRT2 = np.sqrt(2.0)


def test_haar_constant_pair_maps_to_scaled_mean():
    out = haar_transform(np.array([1.0, 1.0]), 1, "forward")
    np.testing.assert_allclose(out, [SQRT2, 0.0], atol=1e-15)


def test_haar_pure_detail():
    out = haar_transform(np.array([1.0, -1.0]), 1, "forward")
    np.testing.assert_allclose(out, [0.0, SQRT2], atol=1e-15)


def test_haar_orthogonality_1d(rng):
    x = rng.standard_normal(64)
    for levels in (1, 2, 3, 6):
        w = haar_forward(x, levels)
        assert abs(np.linalg.norm(w) - np.linalg.norm(x)) <= 1e-12 * np.linalg.norm(x)


def test_haar_roundtrip_1d(rng):
    x = rng.standard_normal(64)
    for levels in (1, 3, 6):
        back = haar_inverse(haar_forward(x, levels), levels)
        np.testing.assert_allclose(back, x, rtol=0, atol=1e-12)


def test_haar_roundtrip_and_orthogonality_2d(rng):
    img = rng.standard_normal((32, 32))
    for levels in (1, 2, 5):
        w = haar_forward(img, levels)
        assert abs(np.linalg.norm(w) - np.linalg.norm(img)) <= 1e-12 * np.linalg.norm(img)
        back = haar_inverse(w, levels)
        np.testing.assert_allclose(back, img, rtol=0, atol=1e-12)


def test_haar_shape_errors():
    with pytest.raises(ValueError):
        haar_forward(np.ones(6), 2)  # 6 not divisible by 4
    with pytest.raises(ValueError):
        haar_forward(np.ones((6, 8)), 2)
    with pytest.raises(ValueError):
        haar_transform(np.ones(4), 1, "sideways")


def test_soft_thresholds():
    np.testing.assert_allclose(soft_threshold(np.array([3.0, -0.5]), 1.0), [2.0, 0.0])
    np.testing.assert_allclose(soft_threshold_nonneg(np.array([3.0, -0.5, 0.2]), 1.0),
                               [2.0, 0.0, 0.0])


# ---------------------------------------------------------------------------
# Convolution kernels
# ---------------------------------------------------------------------------


def _dense_operator(apply_fn, shape_in, size_out):
    """Assemble the matrix of a linear map by probing basis vectors."""
    cols = []
    for j in range(np.prod(shape_in)):
        e = np.zeros(np.prod(shape_in))
        e[j] = 1.0
        cols.append(apply_fn(e.reshape(shape_in)).ravel())
    return np.stack(cols, axis=1)


def test_conv_paths_agree(rng):
    img = rng.standard_normal((12, 10))
    ker = rng.standard_normal((5, 3))
    a = conv2d_reflect(img, ker, use_numba=False)
    b = conv2d_reflect(img, ker, use_numba=None)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-14)
    v = rng.standard_normal((12, 10))
    c = conv2d_reflect_adjoint(v, ker, use_numba=False)
    d = conv2d_reflect_adjoint(v, ker, use_numba=None)
    np.testing.assert_allclose(c, d, rtol=0, atol=1e-14)


def test_conv_adjoint_identity(rng):
    for shape, kshape in (((8, 8), (3, 3)), ((9, 7), (5, 3))):
        ker = rng.standard_normal(kshape)
        x = rng.standard_normal(shape)
        y = rng.standard_normal(shape)
        lhs = float(np.sum(conv2d_reflect(x, ker) * y))
        rhs = float(np.sum(x * conv2d_reflect_adjoint(y, ker)))
        assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))


def test_conv_matches_dense_assembly(rng):
    ker = gaussian_psf(3, 0.8)
    H = _dense_operator(lambda im: conv2d_reflect(im, ker), (6, 6), 36)
    x = rng.standard_normal(36)
    np.testing.assert_allclose(conv2d_reflect(x.reshape(6, 6), ker).ravel(), H @ x,
                               rtol=0, atol=1e-12)
    v = rng.standard_normal(36)
    np.testing.assert_allclose(conv2d_reflect_adjoint(v.reshape(6, 6), ker).ravel(), H.T @ v,
                               rtol=0, atol=1e-12)


def test_conv_kernel_validation():
    with pytest.raises(ValueError):
        conv2d_reflect(np.ones((4, 4)), np.ones((2, 3)))


def test_block_downsample_mean_and_adjoint(rng):
    img = np.arange(16.0).reshape(4, 4)
    down = block_downsample(img, 2)
    np.testing.assert_allclose(down, [[2.5, 4.5], [10.5, 12.5]])
    x = rng.standard_normal((4, 4))
    v = rng.standard_normal((2, 2))
    lhs = float(np.sum(block_downsample(x, 2) * v))
    rhs = float(np.sum(x * block_downsample_adjoint(v, 2)))
    assert abs(lhs - rhs) <= 1e-13
    with pytest.raises(ValueError):
        block_downsample(np.ones((5, 4)), 2)
