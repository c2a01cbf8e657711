"""Restarted solvers: the parameter-free restart driver plus fixed-step
baselines (plain FISTA and fixed-step restarted FISTA).

The driver alternates fixed-length inertial blocks with one extra
Armijo-backtracked forward-backward step per restart.  The gradient
mapping of that extra step both decides termination and feeds an online
estimate of the growth-to-smoothness ratio, which in turn drives a
doubling rule for the block length.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .adabt import AdaBtOutput, fista_adabt
from .core import FBStepResult, fb_bt
from .problems import CompositeProblem
from .trace import TraceRecord

EXIT_EPSILON = "epsilon_reached"
EXIT_BUDGET = "budget_exhausted"

# Relative guard for near-vanishing denominators in the ratio estimator.
DENOM_GUARD = 1e-14


@dataclass(frozen=True)
class FreeFistaConfig:
    """Hyperparameters of the restart driver.

    C controls the doubling rule and must exceed 4/sqrt(rho); the
    default 6.38/sqrt(rho) maximizes the guaranteed decay exponent.
    epsilon = 0 disables the termination test (run to the budget),
    which the reference precomputation relies on.
    """

    rho: float = 0.8
    delta: float = 0.95
    L_min: float = 1e-12
    L0: float = 1.0
    C: Optional[float] = None
    epsilon: float = 1e-6
    max_total_iterations: int = 1_000_000
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
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.max_total_iterations < 1:
            raise ValueError("max_total_iterations must be positive")
        if self.C is not None and self.C <= 4.0 / math.sqrt(self.rho):
            raise ValueError("C must exceed 4/sqrt(rho)")

    @property
    def C_effective(self) -> float:
        return self.C if self.C is not None else 6.38 / math.sqrt(self.rho)


@dataclass
class RestartState:
    """Per-restart bookkeeping accumulated by the driver."""

    j: int = 0
    r_hist: list[tuple[np.ndarray, float]] = field(default_factory=list)
    n_hist: list[int] = field(default_factory=list)
    L_cur: float = 0.0
    kappa_hist: list[float] = field(default_factory=list)
    total_inner: int = 0
    g_hist: list[float] = field(default_factory=list)
    F_plus_hist: list[float] = field(default_factory=list)
    L_plus_hist: list[float] = field(default_factory=list)


@dataclass
class SolveReport:
    """Terminal result of a solver run."""

    x_out: np.ndarray
    exit: str
    restarts: int
    total_inner_iterations: int
    total_backtracks: int
    trace: list[TraceRecord]
    algo: str
    epsilon: float
    elapsed_s: float
    restart_state: Optional[RestartState] = None


def kappa_estimate(F_hist, n_hist, rho: float, j: int) -> Optional[float]:
    """Restart-time estimate of the growth-to-smoothness ratio.

    Minimizes 4/(rho (n_{i-1}+1)^2) * (F(r_{i-1}) - F(r_j)) / (F(r_i) - F(r_j))
    over 1 <= i < j.  Every term is recomputed with the newest F(r_j):
    the minimum does not commute across restarts.  Indices whose
    denominator has collapsed below the guard are skipped; None is
    returned when all of them are (the caller should double the block).
    """
    if j < 2:
        raise ValueError("estimator needs at least two completed restarts")
    if len(F_hist) < j + 1 or len(n_hist) < j:
        raise ValueError("history too short for restart index j")
    F_j = F_hist[j]
    best: Optional[float] = None
    for i in range(1, j):
        den = F_hist[i] - F_j
        num = F_hist[i - 1] - F_j
        # num >= den > 0 in exact arithmetic; once either difference falls
        # to rounding level the term carries no information, so skip it
        if den <= DENOM_GUARD * max(1.0, abs(F_hist[i])):
            continue
        if num <= DENOM_GUARD * max(1.0, abs(F_hist[i - 1])):
            continue
        term = 4.0 / (rho * (n_hist[i - 1] + 1) ** 2) * num / den
        if best is None or term < best:
            best = term
    return best


def doubling_rule(n_prev: int, kappa_j: float, C: float) -> int:
    """Double the block length while n_prev <= C * sqrt(1/kappa_j)."""
    if n_prev < 1:
        raise ValueError("n_prev must be positive")
    if kappa_j <= 0 or C <= 0:
        raise ValueError("kappa_j and C must be positive")
    if n_prev <= C * math.sqrt(1.0 / kappa_j):
        return 2 * n_prev
    return n_prev


BlockRunner = Callable[[np.ndarray, int, float, int, int, float], AdaBtOutput]
FBRunner = Callable[[np.ndarray, float], FBStepResult]


def _run_restart_driver(
    prob: CompositeProblem,
    r0: np.ndarray,
    cfg: FreeFistaConfig,
    algo: str,
    run_block: BlockRunner,
    run_fb: FBRunner,
    kappa_rho: float,
) -> SolveReport:
    t0 = time.monotonic()
    C = cfg.C_effective
    budget = cfg.max_total_iterations
    n0 = int(2 * C)

    state = RestartState()
    trace: list[TraceRecord] = []
    total_iters = 0
    total_bt = 0

    F0 = prob.F(r0)
    state.r_hist.append((np.array(r0, dtype=np.float64), F0))
    F_vals = [F0]
    state.n_hist.append(n0)

    r_plus = np.array(r0, dtype=np.float64)
    L_plus = cfg.L0
    exit_reason = EXIT_BUDGET
    j = 0

    while True:
        j += 1
        n_sched = state.n_hist[j - 1]
        n_run = min(n_sched, budget - total_iters)
        if n_run < 1:
            j -= 1
            break
        out = run_block(r_plus, n_run, L_plus, j, total_iters, t0)
        trace.extend(out.trace)
        total_iters += out.iters_done
        total_bt += out.total_backtracks
        r_j = out.x_final
        L_j = out.L_est
        F_vals.append(float(out.F_hist[-1]))
        state.r_hist.append((r_j.copy(), F_vals[-1]))

        kappa_j = float("nan")
        if j == 1:
            state.n_hist.append(n0)
        else:
            est = kappa_estimate(F_vals, state.n_hist, kappa_rho, j)
            if est is None:
                # conservative: treat an undefined estimate as "block too short"
                n_next = 2 * state.n_hist[j - 1]
            else:
                kappa_j = est
                n_next = doubling_rule(state.n_hist[j - 1], est, C)
            state.kappa_hist.append(kappa_j)
            state.n_hist.append(n_next)

        fb = run_fb(r_j, L_j)
        total_iters += 1
        total_bt += fb.backtracks
        r_plus = fb.point
        L_plus = fb.L_plus
        F_plus = prob.F(r_plus)
        state.g_hist.append(fb.g_norm)
        state.F_plus_hist.append(F_plus)
        state.L_plus_hist.append(L_plus)
        trace.append(
            TraceRecord(
                algo=algo,
                restart=j,
                global_iter=total_iters,
                backtracks=fb.backtracks,
                tau=1.0 / fb.L_plus,
                L_est=fb.L_plus,
                kappa_est=kappa_j,
                n_j=state.n_hist[j],
                F_value=F_plus,
                g_norm=fb.g_norm,
                time_s=time.monotonic() - t0,
            )
        )

        if j >= 2 and cfg.epsilon > 0 and fb.g_norm <= cfg.epsilon:
            exit_reason = EXIT_EPSILON
            break
        if out.iters_done < n_sched or total_iters >= budget:
            break

    state.j = j
    state.L_cur = L_plus
    state.total_inner = total_iters
    return SolveReport(
        x_out=r_plus,
        exit=exit_reason,
        restarts=j,
        total_inner_iterations=total_iters,
        total_backtracks=total_bt,
        trace=trace,
        algo=algo,
        epsilon=cfg.epsilon,
        elapsed_s=time.monotonic() - t0,
        restart_state=state,
    )


def free_fista(prob: CompositeProblem, r0: np.ndarray, cfg: FreeFistaConfig) -> SolveReport:
    """Parameter-free solver: adaptive-backtracking blocks, one extra
    backtracked forward-backward step per restart, ratio-driven block
    doubling, and the gradient-mapping termination test."""

    def run_block(x0, n, L0, restart_idx, iter_offset, t0):
        return fista_adabt(
            prob,
            x0,
            n,
            L0,
            cfg.L_min,
            cfg.rho,
            cfg.delta,
            max_backtracks=cfg.max_backtracks,
            algo_label="free-fista",
            restart_index=restart_idx,
            iter_offset=iter_offset,
            t_origin=t0,
        )

    def run_fb(r, L0):
        return fb_bt(prob, r, L0, cfg.rho, cfg.max_backtracks)

    return _run_restart_driver(prob, r0, cfg, "free-fista", run_block, run_fb, cfg.rho)


def _fixed_step_block(
    prob: CompositeProblem,
    x0: np.ndarray,
    n: int,
    tau: float,
    algo_label: str,
    restart_index: int,
    iter_offset: int,
    t0: float,
) -> AdaBtOutput:
    """n classical FISTA steps at a pinned step size (t restarted at 1)."""
    x_prev = np.array(x0, dtype=np.float64)
    x = x_prev.copy()
    t = 1.0
    F_hist = [prob.F(x)]
    step_norms: list[float] = []
    g_norms: list[float] = []
    trace: list[TraceRecord] = []
    for k in range(n):
        t_new = (1.0 + math.sqrt(1.0 + 4.0 * t * t)) / 2.0
        beta = (t - 1.0) / t_new
        y = x + beta * (x - x_prev)
        x_new = prob.h_prox(y - tau * prob.f_grad(y), tau)
        g_norm = float(np.linalg.norm(y - x_new)) / tau
        F_val = prob.F(x_new)
        F_hist.append(F_val)
        step_norms.append(float(np.linalg.norm(x_new - x)))
        g_norms.append(g_norm)
        trace.append(
            TraceRecord(
                algo=algo_label,
                restart=restart_index,
                global_iter=iter_offset + k + 1,
                backtracks=0,
                tau=tau,
                L_est=1.0 / tau,
                kappa_est=float("nan"),
                n_j=n,
                F_value=F_val,
                g_norm=g_norm,
                time_s=time.monotonic() - t0,
            )
        )
        x_prev, x, t = x, x_new, t_new
    return AdaBtOutput(
        x_final=x,
        L_est=1.0 / tau,
        trace=trace,
        F_hist=np.array(F_hist),
        step_norms=np.array(step_norms),
        taus=np.full(n, tau),
        g_norms=np.array(g_norms),
        total_backtracks=0,
        iters_done=n,
    )


def vanilla_fista(
    prob: CompositeProblem,
    x0: np.ndarray,
    L_hat: float,
    max_iter: int,
    eps: Optional[float] = None,
) -> SolveReport:
    """Classical FISTA with the fixed step 1/L_hat; no backtracking, no
    restart.  When ``eps`` is given, stops once the per-step gradient
    mapping norm reaches it."""
    if L_hat <= 0:
        raise ValueError("L_hat must be positive")
    t0 = time.monotonic()
    tau = 1.0 / L_hat
    x_prev = np.array(x0, dtype=np.float64)
    x = x_prev.copy()
    t = 1.0
    trace: list[TraceRecord] = []
    exit_reason = EXIT_BUDGET
    for k in range(max_iter):
        t_new = (1.0 + math.sqrt(1.0 + 4.0 * t * t)) / 2.0
        beta = (t - 1.0) / t_new
        y = x + beta * (x - x_prev)
        x_new = prob.h_prox(y - tau * prob.f_grad(y), tau)
        g_norm = float(np.linalg.norm(y - x_new)) / tau
        trace.append(
            TraceRecord(
                algo="fista",
                restart=0,
                global_iter=k + 1,
                backtracks=0,
                tau=tau,
                L_est=L_hat,
                kappa_est=float("nan"),
                n_j=0,
                F_value=prob.F(x_new),
                g_norm=g_norm,
                time_s=time.monotonic() - t0,
            )
        )
        x_prev, x, t = x, x_new, t_new
        if eps is not None and g_norm <= eps:
            exit_reason = EXIT_EPSILON
            break
    return SolveReport(
        x_out=x,
        exit=exit_reason,
        restarts=0,
        total_inner_iterations=len(trace),
        total_backtracks=0,
        trace=trace,
        algo="fista",
        epsilon=float("nan") if eps is None else eps,
        elapsed_s=time.monotonic() - t0,
    )


def restart_fista_fixed_step(
    prob: CompositeProblem,
    x0: np.ndarray,
    L_hat: float,
    cfg: FreeFistaConfig,
) -> SolveReport:
    """Restart driver with the step pinned to 1/L_hat.

    Blocks are classical fixed-step FISTA runs, the extra step is a
    plain forward-backward step at the same step size, and the ratio
    estimator uses a unit prefactor (no backtracking anywhere).
    """
    if L_hat <= 0:
        raise ValueError("L_hat must be positive")
    tau = 1.0 / L_hat

    def run_block(x0_, n, _L0, restart_idx, iter_offset, t0):
        return _fixed_step_block(prob, x0_, n, tau, "fista-restart", restart_idx, iter_offset, t0)

    def run_fb(r, _L0):
        r_plus = prob.h_prox(r - tau * prob.f_grad(r), tau)
        g_norm = L_hat * float(np.linalg.norm(r - r_plus))
        return FBStepResult(point=r_plus, L_plus=L_hat, g_norm=g_norm, backtracks=0)

    return _run_restart_driver(prob, r0=x0, cfg=cfg, algo="fista-restart",
                               run_block=run_block, run_fb=run_fb, kappa_rho=1.0)
