"""Shared fixtures and independent numeric oracles for the test suite."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.optimize import minimize, minimize_scalar

from freefista import CompositeProblem


def finite_diff_grad(f, x: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Central finite differences, the reference for every gradient check."""
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        g[i] = (f(x + e) - f(x - e)) / (2.0 * step)
    return g


def power_iteration_max_eig(matvec, dim: int, iters: int = 500, seed: int = 0) -> float:
    """Largest eigenvalue of a symmetric PSD operator by power iteration."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = matvec(v)
        lam = float(np.dot(v, w))
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = w / nw
    return lam


def prox_objective(h_eval, z: np.ndarray, tau: float):
    def obj(w):
        return h_eval(np.asarray(w, dtype=np.float64)) + float(
            np.dot(w - z, w - z)
        ) / (2.0 * tau)

    return obj


def bruteforce_prox_value_separable(h_1d, z: np.ndarray, tau: float) -> float:
    """Coordinatewise numeric minimum of h(w) + ||w-z||^2/(2 tau) for
    separable h; each 1-D piece is convex, so bounded Brent is reliable."""
    total = 0.0
    for zi in z:
        span = 3.0 * (abs(zi) + 1.0)
        res = minimize_scalar(
            lambda w: h_1d(w) + (w - zi) ** 2 / (2.0 * tau),
            bounds=(zi - span, zi + span),
            method="bounded",
            options={"xatol": 1e-12},
        )
        total += float(res.fun)
    return total


def bruteforce_prox_value(h_eval, z: np.ndarray, tau: float) -> float:
    """Generic numeric minimum of the prox objective (multi-start Powell).

    Only used one-sided: the analytic prox value must not exceed this.
    """
    obj = prox_objective(h_eval, z, tau)
    best = obj(z)
    for start in (z, np.zeros_like(z), 0.5 * z):
        res = minimize(obj, start, method="Powell",
                       options={"xtol": 1e-12, "ftol": 1e-14, "maxiter": 20000, "maxfev": 50000})
        best = min(best, float(res.fun))
    return best


def scalar_problem(f, fprime, h=None, hprox=None) -> CompositeProblem:
    """Tiny 1-D composite problem from scalar callables (test plumbing)."""

    def f_eval(x):
        return float(f(x[0]))

    def f_grad(x):
        return np.array([fprime(x[0])])

    def h_eval(x):
        return 0.0 if h is None else float(h(x[0]))

    def h_prox(z, tau):
        return z.copy() if hprox is None else np.array([hprox(z[0], tau)])

    return CompositeProblem(dim=1, f_eval=f_eval, f_grad=f_grad, h_eval=h_eval, h_prox=h_prox)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
