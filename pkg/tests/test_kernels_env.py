"""Kernel dispatch: env-flag fallback selection and path agreement."""

import os
import subprocess
import sys

import numpy as np

from freefista._kernels import DISABLE_ENV, conv2d_reflect, conv2d_reflect_adjoint

_PROBE = (
    "from freefista._kernels import HAVE_NUMBA\n"
    "import sys\n"
    "sys.exit(0 if not HAVE_NUMBA else 1)\n"
)


def test_env_flag_forces_pure_numpy_path():
    env = dict(os.environ, **{DISABLE_ENV: "1"})
    proc = subprocess.run([sys.executable, "-c", _PROBE], env=env)
    assert proc.returncode == 0


def test_both_paths_bitwise_close(rng):
    img = rng.standard_normal((20, 16))
    ker = rng.standard_normal((7, 5))
    np.testing.assert_allclose(
        conv2d_reflect(img, ker, use_numba=False),
        conv2d_reflect(img, ker, use_numba=True),
        rtol=0, atol=1e-13,
    )
    v = rng.standard_normal((20, 16))
    np.testing.assert_allclose(
        conv2d_reflect_adjoint(v, ker, use_numba=False),
        conv2d_reflect_adjoint(v, ker, use_numba=True),
        rtol=0, atol=1e-13,
    )
