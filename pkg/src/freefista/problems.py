"""Composite test problems: f smooth + h prox-friendly, with optional ground truth.

Families: synthetic strongly-convex quadratics (optionally with an l1 term),
l2-l1 regularized logistic regression, wavelet-sparse image inpainting, and
Poisson super-resolution with a generalized Kullback-Leibler data term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from .transforms import (
    block_downsample,
    block_downsample_adjoint,
    conv2d_reflect,
    conv2d_reflect_adjoint,
    gaussian_psf,
    haar_forward,
    haar_inverse,
    haar_transform,  # noqa: F401  (re-exported, part of the module surface)
    soft_threshold,
    soft_threshold_nonneg,
)


@dataclass(frozen=True)
class GroundTruth:
    """Known optimum data for synthetic instances."""

    L_true: float
    mu_true: float
    F_star: float
    x_star: np.ndarray


@dataclass(frozen=True)
class CompositeProblem:
    """Minimize F = f + h with f smooth and h prox-friendly.

    ``f_eval``/``f_grad`` evaluate the smooth part and its gradient,
    ``h_eval`` may return +inf, and ``h_prox(z, tau)`` must return the
    exact minimizer of h(w) + ||w - z||^2 / (2 tau).  Instances are
    immutable and safe to share across concurrently running solvers.
    """

    dim: int
    f_eval: Callable[[np.ndarray], float]
    f_grad: Callable[[np.ndarray], np.ndarray]
    h_eval: Callable[[np.ndarray], float]
    h_prox: Callable[[np.ndarray, float], np.ndarray]
    ground_truth: Optional[GroundTruth] = None
    key: str = ""
    lipschitz_hint: Optional[float] = None
    f_value_grad: Optional[Callable[[np.ndarray], tuple[float, np.ndarray]]] = None

    def F(self, x: np.ndarray) -> float:
        return self.f_eval(x) + self.h_eval(x)

    def smooth_value_grad(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        """f(x) and grad f(x), sharing work when a fused evaluator exists."""
        if self.f_value_grad is not None:
            return self.f_value_grad(x)
        return self.f_eval(x), self.f_grad(x)


# ---------------------------------------------------------------------------
# Synthetic quadratic (+ optional l1) with closed-form optimum
# ---------------------------------------------------------------------------


def make_quadratic_growth_test(
    dim: int,
    L: float,
    mu: float,
    seed: int,
    l1_weight: float = 0.0,
    c: Optional[np.ndarray] = None,
) -> CompositeProblem:
    """Diagonal quadratic f(x) = x'Qx/2 - c'x with spectrum in [mu, L].

    Both spectrum endpoints are attained, so the gradient Lipschitz
    constant is exactly L and the strong-convexity modulus exactly mu.
    With ``l1_weight`` > 0 the nonsmooth part is l1_weight*||x||_1 and the
    optimum is the componentwise soft threshold of c scaled by 1/Q.
    """
    if mu <= 0 or mu > L:
        raise ValueError(f"need 0 < mu <= L, got mu={mu}, L={L}")
    if dim < 1:
        raise ValueError("dim must be positive")
    if dim == 1 and mu != L:
        raise ValueError("dim=1 admits a single eigenvalue; need mu == L")
    rng = np.random.default_rng(seed)
    if dim == 1:
        q = np.array([float(L)])
    else:
        interior = rng.uniform(mu, L, size=dim - 2)
        q = np.concatenate(([mu], interior, [L]))
    if c is None:
        c = rng.standard_normal(dim)
    else:
        c = np.asarray(c, dtype=np.float64)
        if c.shape != (dim,):
            raise ValueError(f"c must have shape ({dim},)")

    lam = float(l1_weight)
    if lam < 0:
        raise ValueError("l1_weight must be nonnegative")
    x_star = soft_threshold(c, lam) / q
    f_star = 0.5 * np.dot(q * x_star, x_star) - np.dot(c, x_star)
    F_star = f_star + lam * np.abs(x_star).sum()

    def f_eval(x: np.ndarray) -> float:
        return 0.5 * float(np.dot(q * x, x)) - float(np.dot(c, x))

    def f_grad(x: np.ndarray) -> np.ndarray:
        return q * x - c

    if lam > 0:

        def h_eval(x: np.ndarray) -> float:
            return lam * float(np.abs(x).sum())

        def h_prox(z: np.ndarray, tau: float) -> np.ndarray:
            return soft_threshold(z, lam * tau)

    else:

        def h_eval(x: np.ndarray) -> float:
            return 0.0

        def h_prox(z: np.ndarray, tau: float) -> np.ndarray:
            return z

    key = f"quadratic:dim={dim},L={L:g},mu={mu:g},seed={seed},l1={lam:g}"
    return CompositeProblem(
        dim=dim,
        f_eval=f_eval,
        f_grad=f_grad,
        h_eval=h_eval,
        h_prox=h_prox,
        ground_truth=GroundTruth(float(L), float(mu), float(F_star), x_star),
        key=key,
        lipschitz_hint=float(L),
    )


# ---------------------------------------------------------------------------
# Logistic regression with l2 smoothing and l1 sparsity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LogisticL2L1Instance:
    """Data (A, b) and weights for the l2-l1 regularized logistic model."""

    A: object  # dense ndarray or scipy sparse matrix, shape (m, n)
    b: np.ndarray  # labels in {-1, +1}, shape (m,)
    lambda1: float
    lambda2: float
    atb_inf: float = field(init=False)

    def __post_init__(self):
        m, _ = self.A.shape
        if self.b.shape != (m,):
            raise ValueError(f"labels must have shape ({m},), got {self.b.shape}")
        if not np.all(np.isin(self.b, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")
        if self.lambda1 <= 0:
            raise ValueError("lambda1 must be positive")
        if self.lambda2 < 0:
            raise ValueError("lambda2 must be nonnegative")
        atb = _as_dense_vector(self.A.T @ self.b)
        s = float(np.max(np.abs(atb))) if atb.size else 0.0
        if s == 0.0:
            raise ValueError("degenerate data: A'b = 0")
        object.__setattr__(self, "atb_inf", s)

    @property
    def n(self) -> int:
        return self.A.shape[1]


def _as_dense_vector(v) -> np.ndarray:
    if sp.issparse(v):
        v = v.toarray()
    return np.asarray(v, dtype=np.float64).ravel()


def logistic_value_grad(inst: LogisticL2L1Instance, x: np.ndarray) -> tuple[float, np.ndarray]:
    """Smooth part of the logistic objective and its exact gradient.

    The log(1 + exp(t)) terms are evaluated as max(t, 0) + log1p(exp(-|t|))
    so arbitrarily large margins do not overflow.
    """
    if x.shape != (inst.n,):
        raise ValueError(f"x must have shape ({inst.n},), got {x.shape}")
    u = _as_dense_vector(inst.A @ x)
    t = -inst.b * u
    vals = np.maximum(t, 0.0) + np.log1p(np.exp(-np.abs(t)))
    scale = inst.lambda1 / (2.0 * inst.atb_inf)
    value = scale * float(vals.sum()) + 0.5 * inst.lambda2 * float(np.dot(x, x))
    # sigma(t) = 1 / (1 + exp(-t)), computed without overflow on both tails
    sig = np.empty_like(t)
    pos = t >= 0
    sig[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    e = np.exp(t[~pos])
    sig[~pos] = e / (1.0 + e)
    grad = scale * _as_dense_vector(inst.A.T @ (-inst.b * sig)) + inst.lambda2 * x
    return value, grad


def logistic_lipschitz_estimate(inst: LogisticL2L1Instance) -> float:
    """Cheap upper bound on the gradient Lipschitz constant of the smooth part."""
    atb = _as_dense_vector(inst.A.T @ inst.b)
    return inst.lambda1 * float(np.dot(atb, atb)) / (8.0 * inst.atb_inf) + inst.lambda2


def make_logistic_instance(
    n: int, m: int, lambda1: float, lambda2: float, seed: int
) -> LogisticL2L1Instance:
    """Random dense instance: standard normal A, uniform random labels."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    b = rng.choice((-1.0, 1.0), size=m)
    return LogisticL2L1Instance(A=A, b=b, lambda1=lambda1, lambda2=lambda2)


def logistic_problem(inst: LogisticL2L1Instance, key: str = "") -> CompositeProblem:
    """Composite wrapper: smooth logistic part plus h(x) = ||x||_1."""

    def f_eval(x):
        return logistic_value_grad(inst, x)[0]

    def f_grad(x):
        return logistic_value_grad(inst, x)[1]

    return CompositeProblem(
        dim=inst.n,
        f_eval=f_eval,
        f_grad=f_grad,
        h_eval=lambda x: float(np.abs(x).sum()),
        h_prox=lambda z, tau: soft_threshold(z, tau),
        ground_truth=None,
        key=key or f"logistic:n={inst.n},m={inst.A.shape[0]},l1={inst.lambda1:g},l2={inst.lambda2:g}",
        lipschitz_hint=logistic_lipschitz_estimate(inst),
        f_value_grad=lambda x: logistic_value_grad(inst, x),
    )


# ---------------------------------------------------------------------------
# Image inpainting with an orthogonal wavelet sparsity prior
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InpaintingInstance:
    """Masked observation y = M x_true with an orthogonal analysis prior."""

    mask: np.ndarray  # 0/1 image, shape (side, side)
    y: np.ndarray  # observed (masked) image, same shape
    lam: float
    levels: int

    def __post_init__(self):
        if self.mask.shape != self.y.shape:
            raise ValueError("mask and observation must share a shape")
        vals = np.unique(self.mask)
        if not np.all(np.isin(vals, (0.0, 1.0))):
            raise ValueError("mask must be a 0/1 operator")
        if self.lam <= 0:
            raise ValueError("lam must be positive")

    @property
    def side(self) -> int:
        return self.mask.shape[0]

    def transform_forward(self, img: np.ndarray) -> np.ndarray:
        return haar_forward(img, self.levels)

    def transform_inverse(self, coeffs: np.ndarray) -> np.ndarray:
        return haar_inverse(coeffs, self.levels)


def make_test_image(side: int, seed: int = 0) -> np.ndarray:
    """Piecewise-smooth synthetic image with values in [0, 1]."""
    rng = np.random.default_rng(seed)
    yy, xx = np.meshgrid(np.linspace(0, 1, side), np.linspace(0, 1, side), indexing="ij")
    img = 0.3 + 0.4 * xx
    img[side // 8 : side // 2, side // 8 : side // 2] += 0.25
    img[5 * side // 8 : 7 * side // 8, side // 2 : 3 * side // 4] -= 0.2
    img += 0.02 * rng.standard_normal((side, side))
    return np.clip(img, 0.0, 1.0)


def make_inpainting_instance(
    side: int, keep_fraction: float, lam: float, seed: int, levels: int = 3,
    image: Optional[np.ndarray] = None,
) -> InpaintingInstance:
    rng = np.random.default_rng(seed)
    img = make_test_image(side, seed) if image is None else np.asarray(image, dtype=np.float64)
    if img.shape != (side, side):
        raise ValueError(f"image must be {side}x{side}")
    mask = (rng.uniform(size=(side, side)) < keep_fraction).astype(np.float64)
    return InpaintingInstance(mask=mask, y=mask * img, lam=lam, levels=levels)


def inpainting_problem(inst: InpaintingInstance, key: str = "") -> CompositeProblem:
    """f(x) = ||Mx - y||^2 / 2, h(x) = lam * ||W x||_1 with W the Haar map.

    Because W is orthogonal the prox of h is W' o soft-threshold o W.
    """
    side = inst.side
    mask = inst.mask.ravel()
    y = inst.y.ravel()
    lam = inst.lam
    levels = inst.levels

    def f_eval(x):
        r = mask * x - y
        return 0.5 * float(np.dot(r, r))

    def f_grad(x):
        return mask * (mask * x - y)

    def h_eval(x):
        w = haar_forward(x.reshape(side, side), levels)
        return lam * float(np.abs(w).sum())

    def h_prox(z, tau):
        w = haar_forward(z.reshape(side, side), levels)
        return haar_inverse(soft_threshold(w, lam * tau), levels).ravel()

    return CompositeProblem(
        dim=side * side,
        f_eval=f_eval,
        f_grad=f_grad,
        h_eval=h_eval,
        h_prox=h_prox,
        ground_truth=None,
        key=key or f"inpainting:side={side},lam={lam:g},levels={levels}",
        lipschitz_hint=1.0,
    )


# ---------------------------------------------------------------------------
# Poisson super-resolution with a generalized Kullback-Leibler data term
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PoissonSRInstance:
    """Down-sampled, blurred, Poisson-noisy observation of a nonnegative image."""

    psf: np.ndarray
    q: int
    z: np.ndarray  # observed counts, shape (side/q, side/q)
    b_bar: float
    lam: float
    side: int

    def __post_init__(self):
        if self.b_bar <= 0:
            raise ValueError("b_bar must be positive (KL must stay well defined)")
        if np.any(self.z < 0):
            raise ValueError("observed counts must be nonnegative")
        if self.side % self.q:
            raise ValueError("side must be divisible by q")
        if np.any(self.psf < 0):
            raise ValueError("PSF must be nonnegative")

    @property
    def m(self) -> int:
        return (self.side // self.q) ** 2

    @property
    def n(self) -> int:
        return self.side * self.side


def _poisson_forward(inst: PoissonSRInstance, x_img: np.ndarray) -> np.ndarray:
    return block_downsample(conv2d_reflect(x_img, inst.psf), inst.q)


def _poisson_adjoint(inst: PoissonSRInstance, v_img: np.ndarray) -> np.ndarray:
    return conv2d_reflect_adjoint(block_downsample_adjoint(v_img, inst.q), inst.psf)


def kl_value_grad(inst: PoissonSRInstance, x: np.ndarray) -> tuple[float, np.ndarray]:
    """Generalized KL divergence KL(MHx + b; z) and its gradient.

    Uses the 0*log 0 = 0 convention.  Raises if any model intensity is
    nonpositive (cannot happen for x >= 0 since b_bar > 0).
    """
    side = inst.side
    x_img = x.reshape(side, side)
    w = _poisson_forward(inst, x_img) + inst.b_bar
    if np.any(w <= 0):
        raise ValueError("KL domain error: model intensity must stay positive")
    z = inst.z
    terms = np.where(z > 0, z * np.log(np.where(z > 0, z, 1.0) / w), 0.0) + w - z
    value = float(terms.sum())
    grad_img = _poisson_adjoint(inst, 1.0 - z / w)
    return value, grad_img.ravel()


def kl_lipschitz_estimate(inst: PoissonSRInstance) -> float:
    """Upper bound on the KL gradient Lipschitz constant over the orthant."""
    side = inst.side
    ones_m = np.ones((side // inst.q, side // inst.q))
    ones_n = np.ones((side, side))
    col_max = float(_poisson_adjoint(inst, ones_m).max())
    row_max = float(_poisson_forward(inst, ones_n).max())
    return float(inst.z.max()) / (inst.b_bar**2) * col_max * row_max


def make_poisson_sr_instance(
    side: int,
    q: int,
    b_bar: float,
    lam: float,
    seed: int,
    psf_size: int = 5,
    psf_sigma: float = 1.0,
    peak: float = 40.0,
    n_sources: int = 12,
) -> PoissonSRInstance:
    """Sparse bright sources, Gaussian blur, q-fold down-sampling, Poisson noise."""
    rng = np.random.default_rng(seed)
    truth = np.zeros((side, side))
    idx = rng.integers(1, side - 1, size=(n_sources, 2))
    truth[idx[:, 0], idx[:, 1]] = rng.uniform(0.5 * peak, peak, size=n_sources)
    psf = gaussian_psf(psf_size, psf_sigma)
    intensity = block_downsample(conv2d_reflect(truth, psf), q) + b_bar
    z = rng.poisson(intensity).astype(np.float64)
    return PoissonSRInstance(psf=psf, q=q, z=z, b_bar=b_bar, lam=lam, side=side)


def poisson_problem(inst: PoissonSRInstance, key: str = "") -> CompositeProblem:
    """Composite model: KL data term plus lam*||x||_1 plus nonnegativity.

    The prox of the nonsmooth part is the one-sided soft threshold
    max(x - lam*tau, 0), which keeps every iterate feasible.
    """
    lam = inst.lam

    def f_eval(x):
        return kl_value_grad(inst, x)[0]

    def f_grad(x):
        return kl_value_grad(inst, x)[1]

    def h_eval(x):
        if np.any(x < 0):
            return float("inf")
        return lam * float(x.sum())

    def h_prox(z, tau):
        return soft_threshold_nonneg(z, lam * tau)

    return CompositeProblem(
        dim=inst.n,
        f_eval=f_eval,
        f_grad=f_grad,
        h_eval=h_eval,
        h_prox=h_prox,
        ground_truth=None,
        key=key or f"poisson-sr:side={inst.side},q={inst.q},bbar={inst.b_bar:g},lam={lam:g}",
        lipschitz_hint=kl_lipschitz_estimate(inst),
        f_value_grad=lambda x: kl_value_grad(inst, x),
    )
