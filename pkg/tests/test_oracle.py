import math

import numpy as np
import pytest

import carleman_fourier as cf
from carleman_fourier.errors import ConfigError, DivergenceError

from conftest import (complex_uniform, make_nondissipative_rescaled,
                      make_rescaled)


# ---------------------------------------------------------------- integrate

def test_integrate_linear_drift(rng):
    n = 3
    g0 = complex_uniform(rng, n)
    ode = cf.FourierOde(n=n, g0=g0, g1=np.zeros((n, n)), u0=complex_uniform(rng, n))
    traj = cf.integrate(ode, 2.0, tol=1e-12)
    np.testing.assert_allclose(traj.state_at(2.0), ode.u0 + 2.0 * g0,
                               rtol=1e-11, atol=1e-12)


def test_integrate_constant_when_rhs_vanishes(rng):
    rp = make_rescaled(rng, 2)
    frozen = cf.RescaledProblem(nu=1.0, f0=np.zeros(2), f1=np.zeros((2, 2)),
                                x0=rp.x0, w0=rp.w0, gamma=rp.gamma)
    traj = cf.integrate(frozen, 1.5, tol=1e-11)
    for t in (0.0, 0.7, 1.5):
        np.testing.assert_allclose(traj.state_at(t), rp.x0, atol=1e-12)


def test_integrate_matches_closed_form_scalar(rng):
    for _ in range(10):
        f0 = complex(rng.uniform(-1, 1), rng.uniform(0.5, 2.0))
        f1 = complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
        x0 = complex(rng.uniform(-2, 2), rng.uniform(-0.2, 0.2))
        ode = cf.FourierOde(n=1, g0=[f0], g1=[[f1]], u0=[x0])
        traj = cf.integrate(ode, 1.2, tol=1e-12)
        w_num = np.exp(1j * traj.state_at(1.2)[0])
        w_ref = cf.closed_form_1d(f0, f1, x0, 1.2)
        assert abs(w_num - w_ref) / abs(w_ref) < 1e-9


def test_integrate_reports_global_error(rng):
    rp = make_rescaled(rng, 2)
    traj = cf.integrate(rp, 1.0, tol=1e-8)
    assert traj.est_global_error < 1e-6
    assert traj.est_global_error > 0


def test_integrate_rejects_bad_tol(rng):
    rp = make_rescaled(rng, 1)
    with pytest.raises(ConfigError):
        cf.integrate(rp, 1.0, tol=1e-2)


def test_trajectory_rejects_extrapolation(rng):
    rp = make_rescaled(rng, 1)
    traj = cf.integrate(rp, 1.0, tol=1e-10)
    with pytest.raises(ConfigError):
        traj.state_at(1.5)


# ------------------------------------------------------------- closed form

def test_closed_form_no_coupling():
    f0, x0 = 0.7 + 0.9j, 0.4 - 0.1j
    for t in (0.0, 0.5, 2.0):
        expected = np.exp(1j * x0) * np.exp(1j * f0 * t)
        assert cf.closed_form_1d(f0, 0.0, x0, t) == pytest.approx(expected,
                                                                  rel=1e-13)


def test_closed_form_initial_value(rng):
    for _ in range(5):
        f0 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        f1 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        x0 = complex(rng.uniform(-2, 2), rng.uniform(-0.5, 0.5))
        assert cf.closed_form_1d(f0, f1, x0, 0.0) == pytest.approx(
            np.exp(1j * x0), rel=1e-14)


def test_closed_form_satisfies_defining_equation(rng):
    # 4th-order central difference of w(t) against i f0 w + i f1 w^2
    h = 1e-3
    for _ in range(10):
        f0 = complex(rng.uniform(-1, 1), rng.uniform(0.3, 1.5))
        f1 = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
        x0 = complex(rng.uniform(-2, 2), rng.uniform(-0.3, 0.3))
        t = 0.8
        w = [cf.closed_form_1d(f0, f1, x0, t + s * h)
             for s in (-2, -1, 0, 1, 2)]
        deriv = (w[0] - 8 * w[1] + 8 * w[3] - w[4]) / (12 * h)
        residual = deriv - 1j * f0 * w[2] - 1j * f1 * w[2] ** 2
        assert abs(residual) <= 1e-10 * max(1.0, abs(w[2]))


def test_closed_form_zero_f0_limit(rng):
    # f0 = 0 uses the series branch: z(t) = z0 - i f1 t
    f1 = 0.3 - 0.2j
    x0 = 0.5 + 0.1j
    t = 0.7
    z = np.exp(-1j * x0) - 1j * f1 * t
    assert cf.closed_form_1d(0.0, f1, x0, t) == pytest.approx(1 / z, rel=1e-12)


# ------------------------------------------------------------- exact_lifted

def test_exact_lifted_at_zero_matches_lift_initial(rng):
    rp = make_rescaled(rng, 2)
    traj = cf.integrate(rp, 0.5, tol=1e-11)
    lifted = cf.exact_lifted(traj, 3, 0.0)
    ref = cf.lift_initial(rp, 3)
    for a, b in zip(lifted.blocks, ref.blocks):
        np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-12)


def test_exact_lifted_norm_identity(rng):
    rp = make_rescaled(rng, 2)
    traj = cf.integrate(rp, 0.8, tol=1e-11)
    state = cf.exact_lifted(traj, 4, 0.5)
    for p in (1, 2, math.inf):
        base = cf.vector_p_norm(state.blocks[0], p)
        for j in range(1, 5):
            assert cf.vector_p_norm(state.blocks[j - 1], p) == pytest.approx(
                base ** j, rel=1e-11)


def test_exact_lifted_first_block(rng):
    rp = make_rescaled(rng, 3)
    traj = cf.integrate(rp, 0.4, tol=1e-11)
    state = cf.exact_lifted(traj, 1, 0.4)
    np.testing.assert_allclose(state.blocks[0],
                               np.exp(1j * traj.state_at(0.4)), rtol=1e-12)


# -------------------------------------------------------------- measure_eta

def test_measure_eta_zero_when_uncoupled(rng):
    rp = make_rescaled(rng, 2)
    frozen = cf.RescaledProblem(nu=1.0, f0=rp.f0, f1=np.zeros((2, 2)),
                                x0=rp.x0, w0=rp.w0, gamma=rp.gamma)
    traj = cf.integrate(frozen, 1.0, tol=1e-12)
    op = cf.LinearOperatorLN.from_rescaled(frozen, 3)
    psi = cf.propagate_dense(cf.dense_LN(op), cf.lift_initial(frozen, 3), 1.0)
    for k in (1, 2, 3):
        assert cf.measure_eta(traj, psi, k, 1.0, 2) < 1e-9


def test_measure_eta_zero_at_initial_time(rng):
    rp = make_rescaled(rng, 2)
    traj = cf.integrate(rp, 0.5, tol=1e-11)
    psi0 = cf.lift_initial(rp, 3)
    assert cf.measure_eta(traj, psi0, 1, 0.0, 2) < 1e-12


def test_measure_eta_below_dissipative_bound(rng):
    rp = make_rescaled(rng, 2, r_target=0.45)
    report = cf.check_dissipative(
        cf.FourierOde(n=2, g0=rp.f0, g1=rp.f1, u0=-1j * np.log(rp.w0)), 2)
    order = 6
    t_end = 1.5
    traj = cf.integrate(rp, t_end, tol=1e-12)
    op = cf.LinearOperatorLN.from_rescaled(rp, order)
    psi = cf.propagate_dense(cf.dense_LN(op), cf.lift_initial(rp, order), t_end)
    bound = cf.eta_bound_dissipative(report, rp, order, 1, 2)
    assert bound.hypotheses_met
    assert cf.measure_eta(traj, psi, 1, t_end, 2) <= bound.value + 1e-10


# ----------------------------------------------------- trajectory invariants

def test_dissipative_norm_monotone(rng):
    tol = 1e-11
    for n, p in [(1, 1), (2, 2), (3, 2)]:
        rp = make_rescaled(rng, n, p=p, r_target=0.5)
        traj = cf.integrate(rp, 2.0, tol=tol)
        values = [cf.vector_p_norm(np.exp(1j * traj.state_at(t)), p)
                  for t in np.linspace(0, 2.0, 30)]
        for earlier, later in zip(values, values[1:]):
            assert later <= earlier + 10 * tol


def test_norm_stays_under_one_over_r(rng):
    r = 5.0
    for _ in range(5):
        rp = make_nondissipative_rescaled(rng, 2, r=r)
        t_r = cf.upper_bounded_time(rp, r, 2)
        traj = cf.integrate(rp, t_r, tol=1e-11)
        for t in np.linspace(0, t_r, 20):
            val = cf.vector_p_norm(np.exp(1j * traj.state_at(t)), 2)
            assert val <= 1.0 / r + 1e-9


def test_gronwall_envelope(rng):
    p, r = 2, 5.0
    for _ in range(5):
        rp = make_nondissipative_rescaled(rng, 2, r=r)
        q = cf.conjugate_exponent(p)
        lam = max(cf.vector_p_norm(rp.f0, math.inf), cf.row_q_norm(rp.f1, q))
        psi0 = rp.w0_norm(p)
        t_r = cf.upper_bounded_time(rp, r, p)
        traj = cf.integrate(rp, t_r, tol=1e-11)
        for t in np.linspace(0, t_r, 15):
            val = cf.vector_p_norm(np.exp(1j * traj.state_at(t)), p)
            assert val <= psi0 * math.exp(lam * (1 + 1 / r) * t) + 1e-9


def test_integrate_blowup_raises():
    # strongly anti-dissipative scalar problem with a finite-time pole
    ode = cf.FourierOde(n=1, g0=[-3j], g1=[[-4j]], u0=[-1.2j])
    with pytest.raises(DivergenceError):
        cf.integrate(ode, 50.0, tol=1e-10)


def test_measure_eta_accepts_solve_result(rng):
    rp = make_rescaled(rng, 2, r_target=0.4)
    order, horizon = 5, 1.0
    traj = cf.integrate(rp, horizon, tol=1e-12)
    op = cf.LinearOperatorLN.from_rescaled(rp, order)
    cfg = cf.TaylorConfig(m=8, h=horizon / 8, k=16)
    res = cf.forward_solve(op, cfg, cf.lift_initial(rp, order))
    via_solve = cf.measure_eta(traj, res, 1, horizon, 2)
    dense_state = cf.propagate_dense(cf.dense_LN(op),
                                     cf.lift_initial(rp, order), horizon)
    via_dense = cf.measure_eta(traj, dense_state, 1, horizon, 2)
    # k = 16 makes the stepping error negligible next to the lifting error
    assert via_solve == pytest.approx(via_dense, rel=1e-6)
    with pytest.raises(ConfigError):
        cf.measure_eta(traj, res, 1, 0.55 * horizon, 2)  # off the step grid
