"""FISTA with adaptive (non-monotone) backtracking.

Each iteration first tries to enlarge the step (tau/delta, capped at
1/L_min), then shrinks it by rho until the Bregman acceptance test
passes.  The inertial coefficient is coupled to the step through
t_{k+1} = (1 + sqrt(1 + 4 (tau_k/tau_{k+1}) t_k^2)) / 2, so the
extrapolated point is recomputed on every shrink pass.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .core import BacktrackDivergenceError, _accepts
from .problems import CompositeProblem
from .trace import TraceRecord


def t_update(t_k: float, tau_k: float, tau_k1: float) -> float:
    """Step-coupled inertial update; satisfies tau_k1*t*(t-1) = tau_k*t_k^2."""
    return (1.0 + math.sqrt(1.0 + 4.0 * (tau_k / tau_k1) * t_k * t_k)) / 2.0


def harmonic_L_bar(L_list) -> float:
    """Squared harmonic mean of sqrt(L_i); the sharp constant of the
    adaptive-backtracking O(1/k^2) rate."""
    arr = np.asarray(L_list, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("need at least one step estimate")
    return float(np.mean(1.0 / np.sqrt(arr))) ** -2


@dataclass
class AdaBtOutput:
    """Result of a fixed-length adaptive-backtracking block."""

    x_final: np.ndarray
    L_est: float
    trace: list[TraceRecord] = field(default_factory=list)
    F_hist: np.ndarray = field(default_factory=lambda: np.empty(0))
    step_norms: np.ndarray = field(default_factory=lambda: np.empty(0))
    taus: np.ndarray = field(default_factory=lambda: np.empty(0))
    g_norms: np.ndarray = field(default_factory=lambda: np.empty(0))
    total_backtracks: int = 0
    iters_done: int = 0
    stopped_early: bool = False


def fista_adabt(
    prob: CompositeProblem,
    x0: np.ndarray,
    n: int,
    L0: float,
    L_min: float,
    rho: float,
    delta: float,
    max_backtracks: int = 60,
    algo_label: str = "fista-adabt",
    restart_index: int = 0,
    iter_offset: int = 0,
    t_origin: float | None = None,
    stop_g_norm: float | None = None,
) -> AdaBtOutput:
    """Run exactly n accepted proximal-gradient steps from x0.

    Returns the final point together with L_est = 1/tau_final, the full
    per-iteration trace and the raw per-step history needed by the
    restart driver and by invariant checks.  ``stop_g_norm`` optionally
    stops the block once the free per-step gradient-mapping norm
    ||y - x_new|| / tau drops to the given level.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if L0 < L_min:
        raise ValueError("need L0 >= L_min")
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    t0 = time.monotonic() if t_origin is None else t_origin

    x_prev = np.array(x0, dtype=np.float64)
    x = x_prev.copy()
    t = 1.0
    tau = 1.0 / L0

    F_hist = [prob.F(x)]
    step_norms: list[float] = []
    taus: list[float] = []
    g_norms: list[float] = []
    trace: list[TraceRecord] = []
    total_bt = 0
    stopped = False
    k_done = 0

    for k in range(n):
        tau_head = min(tau / delta, 1.0 / L_min)
        accepted = False
        for i in range(max_backtracks + 1):
            tau_new = rho**i * tau_head
            t_new = t_update(t, tau, tau_new)
            beta = (t - 1.0) / t_new
            y = x + beta * (x - x_prev)
            f_y, grad_y = prob.smooth_value_grad(y)
            x_new = prob.h_prox(y - tau_new * grad_y, tau_new)
            f_new = prob.f_eval(x_new)
            if _accepts(f_new, f_y, grad_y, x_new, y, tau_new):
                accepted = True
                break
        if not accepted:
            raise BacktrackDivergenceError(
                f"no acceptable step at iteration {k + 1} after {max_backtracks} passes"
            )
        total_bt += i
        g_norm = float(np.linalg.norm(y - x_new)) / tau_new
        F_val = f_new + prob.h_eval(x_new)
        F_hist.append(F_val)
        step_norms.append(float(np.linalg.norm(x_new - x)))
        taus.append(tau_new)
        g_norms.append(g_norm)
        trace.append(
            TraceRecord(
                algo=algo_label,
                restart=restart_index,
                global_iter=iter_offset + k + 1,
                backtracks=i,
                tau=tau_new,
                L_est=1.0 / tau_new,
                kappa_est=float("nan"),
                n_j=n,
                F_value=F_val,
                g_norm=g_norm,
                time_s=time.monotonic() - t0,
            )
        )
        x_prev, x, t, tau = x, x_new, t_new, tau_new
        k_done = k + 1
        if stop_g_norm is not None and g_norm <= stop_g_norm:
            stopped = True
            break

    return AdaBtOutput(
        x_final=x,
        L_est=1.0 / tau,
        trace=trace,
        F_hist=np.array(F_hist),
        step_norms=np.array(step_norms),
        taus=np.array(taus),
        g_norms=np.array(g_norms),
        total_backtracks=total_bt,
        iters_done=k_done,
        stopped_early=stopped,
    )
