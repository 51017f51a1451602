"""Particular trajectories, the width constant and the accumulated phase."""

import math

import numpy as np
import pytest

from ncho.model import (
    ConstantSignal,
    DriveField,
    NCSpace,
    OscillatorConfig,
    SinusoidSignal,
    ZeroSignal,
)
from ncho.dynamics import (
    QuadraticHamiltonianCoeffs,
    ode_residual,
    phase_Y,
    rho_constant,
    solve_particular,
)
from ncho.wavefunctions import OscillatorSystem

UNIT_MODE = dict(beta1=0.5, beta2=0.5)  # unit-mass, unit-frequency oscillator


def make_coeffs(beta3=None, beta4=None, **kw):
    params = dict(UNIT_MODE)
    params.update(kw)
    return QuadraticHamiltonianCoeffs(
        beta3=beta3 or ZeroSignal(), beta4=beta4 or ZeroSignal(), **params
    )


# ---------------------------------------------------------------------------
# width constant


def test_rho_constant_unit_oscillator():
    rho = rho_constant(make_coeffs())
    assert rho == pytest.approx(0.25**0.25)
    assert rho**2 == pytest.approx(0.5)


def test_rho_constant_matches_dressed_width():
    # beta values of the theta=1 planar mode reproduce rho^2 = 1/(2 M omega1)
    coeffs = make_coeffs(beta1=1.0 / 1.6, beta2=0.8 * 1.25 / 2.0)
    assert rho_constant(coeffs) ** 2 == pytest.approx(0.5590169943749473, rel=1e-12)


def test_rho_constant_solves_auxiliary_equation():
    rng = np.random.default_rng(11)
    for _ in range(20):
        b1, b2 = rng.uniform(0.05, 5.0, 2)
        rho = rho_constant(make_coeffs(beta1=b1, beta2=b2))
        residual = 4 * b1 * b2 * rho - b1**2 / rho**3
        assert abs(residual) <= 1e-14 * max(1.0, b1**2 / rho**3)


def test_rho_constant_rejects_bad_coeffs():
    with pytest.raises(ValueError):
        make_coeffs(beta1=0.0)
    with pytest.raises(ValueError):
        make_coeffs(beta2=-1.0)


# ---------------------------------------------------------------------------
# particular solutions


def test_zero_forcing_stays_at_rest():
    traj = solve_particular(make_coeffs(), (0.0, 5.0), 1e-3)
    assert np.abs(traj.Q).max() == 0.0
    assert np.abs(traj.P).max() == 0.0


def test_constant_drive_steady_state():
    # third-axis mode with constant force, started at the steady point
    m, w0, qE0 = 1.0, 1.0, 0.7
    coeffs = make_coeffs(beta1=1 / (2 * m), beta2=m * w0**2 / 2,
                         beta4=ConstantSignal(qE0))
    q_ss = -qE0 / (m * w0**2)
    traj = solve_particular(coeffs, (0.0, 4.0), 1e-3, init=(q_ss, 0.0))
    np.testing.assert_allclose(traj.Q, q_ss, atol=1e-12)
    np.testing.assert_allclose(traj.Qdot, 0.0, atol=1e-12)


def driven_oracle(t, w, W, f0):
    """Closed form of y'' + w^2 y = f0 sin(W t), y(0) = y'(0) = 0, W != w."""
    return f0 / (w**2 - W**2) * (np.sin(W * t) - (W / w) * np.sin(w * t))


def test_sinusoidal_forcing_matches_textbook_solution():
    # beta4 = sin(2t) forces Q'' + Q = -2*beta1*sin(2t); ten drive periods
    W = 2.0
    coeffs = make_coeffs(beta4=SinusoidSignal(1.0, W))
    t_end = 10 * 2 * math.pi / W
    traj = solve_particular(coeffs, (0.0, t_end), 1e-3)
    exact = driven_oracle(traj.t, 1.0, W, -2 * coeffs.beta1)
    scale = np.abs(exact).max()
    assert np.abs(traj.Q - exact).max() / scale < 1e-6


def test_rk4_fourth_order_convergence():
    W = 2.0
    coeffs = make_coeffs(beta4=SinusoidSignal(1.0, W))
    t_end = 10 * 2 * math.pi / W

    def endpoint_error(step):
        traj = solve_particular(coeffs, (0.0, t_end), step)
        return abs(traj.Q[-1] - driven_oracle(t_end, 1.0, W, -2 * coeffs.beta1))

    assert endpoint_error(4e-3) / endpoint_error(2e-3) >= 12.0


def test_ode_residual_property():
    drive = DriveField((SinusoidSignal(1.0, 2.0), ConstantSignal(0.5)))
    cfg = OscillatorConfig(1.0, 1.0, 1.0, drive)
    system = OscillatorSystem(cfg, NCSpace(0.9, 0.4), window=(0.0, 3.0))
    for coeffs, traj in zip(system.axis_coeffs, system.trajectories):
        forcing_scale = 1.0 + max(
            np.abs(coeffs.beta3.value(traj.t)).max(),
            np.abs(coeffs.beta4.value(traj.t)).max(),
        )
        res_q, res_p = ode_residual(traj, coeffs)
        assert res_q < 1e-5 * forcing_scale
        assert res_p < 1e-5 * forcing_scale


def test_canonical_lock_between_Q_and_P():
    # the stored slopes satisfy Hamilton's equations at every node
    coeffs = make_coeffs(beta3=SinusoidSignal(0.6, 1.9, 0.5),
                         beta4=ConstantSignal(0.8))
    traj = solve_particular(coeffs, (0.0, 3.0), 1e-3, init=(0.2, -0.4))
    np.testing.assert_allclose(
        traj.Qdot, 2 * coeffs.beta1 * traj.P + coeffs.beta3.value(traj.t),
        atol=1e-12)
    np.testing.assert_allclose(
        traj.Pdot, -2 * coeffs.beta2 * traj.Q - coeffs.beta4.value(traj.t),
        atol=1e-12)


def test_interpolation_matches_closed_form():
    W = 2.0
    coeffs = make_coeffs(beta4=SinusoidSignal(1.0, W))
    traj = solve_particular(coeffs, (0.0, 5.0), 1e-3)
    for t in (0.12345, 1.6789, 4.000317):
        q, qd, _, _ = traj.interpolate(t)
        assert q == pytest.approx(driven_oracle(t, 1.0, W, -1.0), abs=1e-9)
    with pytest.raises(ValueError):
        traj.interpolate(5.5)


def test_solver_argument_validation():
    with pytest.raises(ValueError):
        solve_particular(make_coeffs(), (0.0, 1.0), -1e-3)
    with pytest.raises(ValueError):
        solve_particular(make_coeffs(), (1.0, 1.0), 1e-3)


def test_trajectory_csv_export(tmp_path):
    traj = solve_particular(make_coeffs(beta4=ConstantSignal(1.0)), (0.0, 0.5), 1e-2)
    path = tmp_path / "traj.csv"
    traj.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,Q,Qdot,P,Pdot"
    assert len(lines) == traj.t.size + 1
    loaded = np.loadtxt(path, delimiter=",", skiprows=1)
    np.testing.assert_allclose(loaded[:, 1], traj.Q, rtol=1e-15)


# ---------------------------------------------------------------------------
# phase


def undriven_system(dim=2, theta=0.0, eta=0.0):
    cfg = OscillatorConfig(1.0, 1.0, 1.0, DriveField.zero(dim))
    return OscillatorSystem(cfg, NCSpace(theta, eta, dim=dim), window=(0.0, 5.0))


def test_phase_undriven_2d_is_secular():
    system = undriven_system(theta=0.6, eta=0.2)
    w1 = system.params.omega1
    for t in (0.0, 1.0, 3.3):
        y = phase_Y((0, 0), system.axis_coeffs, system.trajectories, t, 1.0)
        assert y.Y == pytest.approx(-w1 * t, abs=1e-12)


def test_phase_undriven_3d_adds_axis_term():
    system = undriven_system(dim=3, theta=0.6, eta=0.2)
    w1 = system.params.omega1
    y = phase_Y((0, 0, 0), system.axis_coeffs, system.trajectories, 2.0, 1.0)
    assert y.Y == pytest.approx(-(w1 + 0.5) * 2.0, abs=1e-12)


def test_phase_additive_in_quantum_numbers():
    system = undriven_system(theta=0.6, eta=0.2)
    t = 2.7
    y00 = phase_Y((0, 0), system.axis_coeffs, system.trajectories, t, 1.0).Y
    y21 = phase_Y((2, 1), system.axis_coeffs, system.trajectories, t, 1.0).Y
    assert y21 - y00 == pytest.approx(-3 * system.params.omega1 * t, rel=1e-13)


def test_phase_zero_at_start():
    system = undriven_system(theta=0.6, eta=0.2)
    for ns in ((0, 0), (3, 1)):
        assert phase_Y(ns, system.axis_coeffs, system.trajectories, 0.0, 1.0).Y == 0.0


def test_phase_constant_drive_steady_state_shift():
    # constant axis-3 force from the steady gauge adds a linear-in-t term
    # (m/2hbar) * w0^2 * (qE0 / m w0^2)^2 * t relative to the undriven phase
    m, w0, hbar, qE0 = 1.0, 1.0, 1.0, 0.8
    drive = DriveField((ZeroSignal(), ZeroSignal(), ConstantSignal(qE0)))
    cfg = OscillatorConfig(m, w0, 1.0, drive)
    q_ss = -qE0 / (m * w0**2)
    system = OscillatorSystem(
        cfg, NCSpace(0.0, 0.0, dim=3), window=(0.0, 4.0),
        init_conditions=[(0.0, 0.0), (0.0, 0.0), (q_ss, 0.0)],
    )
    t = 3.0
    y = phase_Y((0, 0, 0), system.axis_coeffs, system.trajectories, t, hbar).Y
    undriven = -(system.params.omega1 + 0.5 * w0) * t
    expected_shift = (m / (2 * hbar)) * w0**2 * q_ss**2 * t
    assert y - undriven == pytest.approx(expected_shift, rel=1e-10)


def test_phase_rejects_time_outside_window():
    system = undriven_system()
    with pytest.raises(ValueError):
        phase_Y((0, 0), system.axis_coeffs, system.trajectories, 7.0, 1.0)
