"""Inertial update, harmonic step average and the backtracked FISTA block."""

import math

import numpy as np
import pytest

from freefista import (
    BacktrackDivergenceError,
    fista_adabt,
    harmonic_L_bar,
    make_quadratic_growth_test,
    t_update,
)
from conftest import scalar_problem


def test_t_update_classical_value():
    assert t_update(1.0, 1.0, 1.0) == pytest.approx((1 + math.sqrt(5)) / 2, rel=1e-15)


def test_t_update_step_ratio_value():
    # ratio tau_k / tau_{k+1} = 0.8
    assert t_update(1.0, 0.8, 1.0) == pytest.approx(1.5246950765959598, rel=1e-14)


def test_t_update_algebraic_identity(rng):
    for _ in range(1000):
        t = float(rng.uniform(1.0, 50.0))
        tau_k = float(rng.uniform(1e-6, 10.0))
        tau_k1 = float(rng.uniform(1e-6, 10.0))
        t_new = t_update(t, tau_k, tau_k1)
        lhs = tau_k1 * t_new * (t_new - 1.0)
        rhs = tau_k * t * t
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_harmonic_constant_list():
    assert harmonic_L_bar([7.5, 7.5, 7.5]) == pytest.approx(7.5, rel=1e-14)


def test_harmonic_two_elements():
    assert harmonic_L_bar([1.0, 4.0]) == pytest.approx(16.0 / 9.0, rel=1e-14)


def test_harmonic_between_min_and_max(rng):
    for _ in range(200):
        ls = rng.uniform(0.1, 100.0, size=rng.integers(1, 12))
        val = harmonic_L_bar(ls)
        assert ls.min() - 1e-12 <= val <= ls.max() + 1e-12


def test_harmonic_empty_list():
    with pytest.raises(ValueError):
        harmonic_L_bar([])


def _nesterov_reference(x0, grad, tau, n):
    """Plain accelerated gradient descent, written independently."""
    x_prev = x0.copy()
    x = x0.copy()
    t = 1.0
    out = [x.copy()]
    for _ in range(n):
        t_next = (1.0 + math.sqrt(1.0 + 4.0 * t * t)) / 2.0
        y = x + (t - 1.0) / t_next * (x - x_prev)
        x_prev, x, t = x, y - tau * grad(y), t_next
        out.append(x.copy())
    return out


def test_matches_reference_accelerated_descent():
    prob = scalar_problem(lambda x: 0.5 * x * x, lambda x: x)
    x0 = np.array([2.0])
    out = fista_adabt(prob, x0, 10, L0=1.0, L_min=1e-12, rho=0.5, delta=1.0)
    ref = _nesterov_reference(x0, lambda y: y, 1.0, 10)
    np.testing.assert_allclose(out.x_final, ref[-1], rtol=0, atol=1e-12)
    # no rejected passes anywhere: L0 matches the true curvature
    assert out.total_backtracks == 0
    np.testing.assert_allclose(out.taus, np.ones(10))


def test_matches_reference_on_anisotropic_quadratic():
    prob = make_quadratic_growth_test(6, 30.0, 1.0, seed=12)
    x0 = np.full(6, 1.5)
    L = prob.ground_truth.L_true
    out = fista_adabt(prob, x0, 25, L0=L, L_min=1e-12, rho=0.5, delta=1.0)
    ref = _nesterov_reference(x0, prob.f_grad, 1.0 / L, 25)
    np.testing.assert_allclose(out.x_final, ref[-1], rtol=0, atol=1e-12)


def test_fixed_point_start():
    prob = make_quadratic_growth_test(5, 12.0, 1.0, seed=1, l1_weight=0.2)
    x_star = prob.ground_truth.x_star
    # stable step (L0 >= L_true) and fixed tau: the minimizer stays put
    out = fista_adabt(prob, x_star, 15, L0=20.0, L_min=1e-12, rho=0.8, delta=1.0)
    np.testing.assert_allclose(out.x_final, x_star, atol=1e-12)
    assert np.all(out.step_norms <= 1e-12)
    # an underestimated L0 makes tau unstable until the acceptance test
    # can see the violation, so rounding residues wander inside the
    # slack noise ball; the value stays at the optimum to rounding
    out2 = fista_adabt(prob, x_star, 15, L0=2.0, L_min=1e-12, rho=0.8, delta=0.95)
    assert np.linalg.norm(out2.x_final - x_star) <= 1e-7
    assert prob.F(out2.x_final) - prob.ground_truth.F_star <= 1e-13


def test_rate_certificate_on_lasso_instance(rng):
    prob = make_quadratic_growth_test(40, 100.0, 1.0, seed=13, l1_weight=0.3)
    gt = prob.ground_truth
    x0 = rng.uniform(-1, 1, 40)
    d0_sq = float(np.dot(x0 - gt.x_star, x0 - gt.x_star))
    out = fista_adabt(prob, x0, 200, L0=1.0, L_min=1e-12, rho=0.8, delta=0.95)
    for k in range(out.iters_done):
        lbar = harmonic_L_bar(1.0 / out.taus[: k + 1])
        bound = 2.0 * lbar * d0_sq / (k + 1) ** 2
        assert out.F_hist[k + 1] - gt.F_star <= bound * (1 + 1e-9)


def test_energy_decrease_and_value_never_above_start(rng):
    prob = make_quadratic_growth_test(30, 500.0, 1.0, seed=14, l1_weight=0.1)
    x0 = rng.uniform(-1, 1, 30)
    out = fista_adabt(prob, x0, 150, L0=1.0, L_min=1e-12, rho=0.8, delta=0.95)
    energy = out.F_hist[1:] + out.step_norms**2 / (2.0 * out.taus)
    energy = np.concatenate(([out.F_hist[0]], energy))
    for a, b in zip(energy, energy[1:]):
        assert b <= a + 1e-10 * max(1.0, abs(a))
    assert np.all(out.F_hist[1:] <= out.F_hist[0] + 1e-10)


def test_step_bounds_on_ground_truth(rng):
    prob = make_quadratic_growth_test(20, 300.0, 1.0, seed=15)
    rho = 0.8
    out = fista_adabt(prob, rng.uniform(-1, 1, 20), 120, L0=1.0, L_min=1e-3, rho=rho, delta=0.9)
    L_ests = 1.0 / out.taus
    assert np.all(L_ests >= 1e-3)
    assert np.all(L_ests <= prob.ground_truth.L_true / rho * (1 + 1e-12))
    assert out.L_est == pytest.approx(L_ests[-1])


def test_growth_rate_bound(rng):
    # contraction of the value gap across one block on a well-conditioned problem
    prob = make_quadratic_growth_test(25, 100.0, 1.0, seed=16, l1_weight=0.2)
    gt = prob.ground_truth
    rho = 0.8
    x0 = rng.uniform(-1, 1, 25)
    out = fista_adabt(prob, x0, 100, L0=1.0, L_min=1e-12, rho=rho, delta=0.95)
    gap0 = out.F_hist[0] - gt.F_star
    for k in range(out.iters_done):
        bound = 4.0 * gt.L_true / (rho * gt.mu_true * (k + 1) ** 2) * gap0
        assert out.F_hist[k + 1] - gt.F_star <= bound * (1 + 1e-9)


def test_monotone_special_case_zero_backtracks():
    # delta = 1 with a dominating initial estimate: constant tau, no rejects
    prob = make_quadratic_growth_test(10, 50.0, 1.0, seed=17)
    out = fista_adabt(prob, np.ones(10), 60, L0=75.0, L_min=1e-12, rho=0.5, delta=1.0)
    assert out.total_backtracks == 0
    np.testing.assert_allclose(out.taus, np.full(60, 1.0 / 75.0))


def test_early_stop_on_gradient_norm(rng):
    prob = make_quadratic_growth_test(15, 20.0, 1.0, seed=18, l1_weight=0.1)
    out = fista_adabt(prob, rng.uniform(-1, 1, 15), 5000, L0=1.0, L_min=1e-12,
                      rho=0.8, delta=0.95, stop_g_norm=1e-5)
    assert out.stopped_early
    assert out.g_norms[-1] <= 1e-5
    assert out.iters_done < 5000


def test_backtrack_divergence_propagates():
    prob = scalar_problem(lambda x: 0.5e8 * x * x, lambda x: 1e8 * x)
    with pytest.raises(BacktrackDivergenceError):
        fista_adabt(prob, np.array([1.0]), 3, L0=1e-4, L_min=1e-6,
                    rho=0.9, delta=1.0, max_backtracks=5)


def test_input_validation():
    prob = scalar_problem(lambda x: 0.5 * x * x, lambda x: x)
    with pytest.raises(ValueError):
        fista_adabt(prob, np.zeros(1), 0, 1.0, 1e-12, 0.8, 0.95)
    with pytest.raises(ValueError):
        fista_adabt(prob, np.zeros(1), 5, 1.0, 2.0, 0.8, 0.95)  # L0 < L_min
    with pytest.raises(ValueError):
        fista_adabt(prob, np.zeros(1), 5, 1.0, 1e-12, 1.2, 0.95)
    with pytest.raises(ValueError):
        fista_adabt(prob, np.zeros(1), 5, 1.0, 1e-12, 0.8, 0.0)
