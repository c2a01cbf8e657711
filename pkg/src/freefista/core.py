"""Shared first-order kernel: forward-backward map, gradient mapping,
Bregman acceptance test and the Armijo-backtracked forward-backward step."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problems import CompositeProblem

# Absolute slack added to the Bregman acceptance test; without it the
# search can loop forever once both sides agree to rounding.  Must stay
# at rounding scale: any larger and the non-monotone search accepts
# steps far above the curvature bound once ||x_new - y|| is small,
# flooring the reachable gradient-mapping norm near sqrt(slack * L).
ACCEPT_SLACK = 1e-15


class BacktrackDivergenceError(RuntimeError):
    """Step-size search exceeded its pass budget.

    Usually means the smooth part is not gradient-Lipschitz on the
    visited region, or the acceptance slack is too small for the
    problem's scale.
    """


@dataclass(frozen=True)
class BacktrackConfig:
    """Step-size search parameters.

    rho shrinks a rejected step, delta enlarges the first attempt of
    each iteration (delta = 1 disables enlargement), L_min caps the step
    from above via tau <= 1/L_min, and L0 sets the initial estimate.
    """

    rho: float = 0.8
    delta: float = 0.95
    L_min: float = 1e-12
    L0: float = 1.0
    max_backtracks: int = 60

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise ValueError("rho must lie in (0, 1)")
        if not 0.0 < self.delta <= 1.0:
            raise ValueError("delta must lie in (0, 1]")
        if self.L_min <= 0:
            raise ValueError("L_min must be positive")
        if self.L0 < self.L_min:
            raise ValueError("need L0 >= L_min")
        if self.max_backtracks < 1:
            raise ValueError("max_backtracks must be positive")


@dataclass(frozen=True)
class FBStepResult:
    """Accepted forward-backward step: point, step Lipschitz estimate,
    gradient-mapping norm at the input point, and rejected pass count."""

    point: np.ndarray
    L_plus: float
    g_norm: float
    backtracks: int


def forward_backward_map(prob: CompositeProblem, y: np.ndarray, tau: float) -> np.ndarray:
    """One prox-gradient step: prox_{tau h}(y - tau * grad f(y))."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    return prob.h_prox(y - tau * prob.f_grad(y), tau)


def composite_gradient_mapping(prob: CompositeProblem, y: np.ndarray, tau: float) -> np.ndarray:
    """(y - T_tau(y)) / tau; vanishes exactly at minimizers of f + h."""
    return (y - forward_backward_map(prob, y, tau)) / tau


def bregman_f(prob: CompositeProblem, x: np.ndarray, y: np.ndarray) -> float:
    """f(x) - f(y) - <grad f(y), x - y>; nonnegative for convex f."""
    return prob.f_eval(x) - prob.f_eval(y) - float(np.dot(prob.f_grad(y), x - y))


def _accepts(f_new: float, f_y: float, grad_y: np.ndarray, x_new: np.ndarray, y: np.ndarray, tau: float) -> bool:
    d = x_new - y
    breg = f_new - f_y - float(np.dot(grad_y, d))
    return breg <= float(np.dot(d, d)) / (2.0 * tau) + ACCEPT_SLACK * max(1.0, abs(f_y))


def acceptance_test(prob: CompositeProblem, x_new: np.ndarray, y: np.ndarray, tau: float) -> bool:
    """True iff the Bregman divergence at (x_new, y) is within the
    quadratic envelope ||x_new - y||^2 / (2 tau), up to absolute slack."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    f_y, grad_y = prob.smooth_value_grad(y)
    return _accepts(prob.f_eval(x_new), f_y, grad_y, x_new, y, tau)


def fb_bt(
    prob: CompositeProblem,
    r: np.ndarray,
    L0: float,
    rho: float,
    max_backtracks: int = 60,
) -> FBStepResult:
    """Forward-backward step with Armijo backtracking from estimate L0.

    Shrinks tau = rho^i / L0 until the acceptance test holds; the
    returned L_plus is 1/tau of the accepted step, so L_plus >= L0, and
    g_norm = L_plus * ||r - r_plus|| is the composite gradient-mapping
    norm at r for step 1/L_plus.
    """
    if L0 <= 0:
        raise ValueError("L0 must be positive")
    f_r, grad_r = prob.smooth_value_grad(r)
    for i in range(max_backtracks + 1):
        tau = rho**i / L0
        r_plus = prob.h_prox(r - tau * grad_r, tau)
        if _accepts(prob.f_eval(r_plus), f_r, grad_r, r_plus, r, tau):
            L_plus = 1.0 / tau
            g_norm = L_plus * float(np.linalg.norm(r - r_plus))
            return FBStepResult(point=r_plus, L_plus=L_plus, g_norm=g_norm, backtracks=i)
    raise BacktrackDivergenceError(
        f"no acceptable step after {max_backtracks} shrink passes (L0={L0:g}, rho={rho:g})"
    )
