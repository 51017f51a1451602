"""Fisher/Shannon quadrature, closed forms and the noncommutative bounds."""

import json
import math

import numpy as np
import pytest

from ncho.model import (
    ConstantSignal,
    DriveField,
    NCSpace,
    OscillatorConfig,
    SinusoidSignal,
)
from ncho.wavefunctions import OscillatorSystem
from ncho.infotheory import (
    InfoReport,
    SampledDensity,
    closed_forms,
    fisher_commutative,
    fisher_nc,
    info_from_state,
    moments,
    nc_uncertainty_bounds,
    shannon,
)

LN_PI = math.log(math.pi)
REPORT_FIELDS = ("F_r", "F_p", "F_r_nc", "F_p_nc", "S_r_nc", "S_p_nc",
                 "var_r_nc", "var_p_nc", "cramer_rao_r", "cramer_rao_p",
                 "bbm_sum")


def make_cfg(dim=2, drive=None):
    return OscillatorConfig(1.0, 1.0, 1.0, drive or DriveField.zero(dim))


def gaussian_density(sigmas, centers, points=512, extent=8.0):
    grids = []
    for s, c in zip(sigmas, centers):
        delta = 2 * extent * s / points
        k = int(math.ceil((abs(c) + extent * s) / delta))
        grids.append((np.arange(2 * k) - k) * delta)
    mesh = np.meshgrid(*grids, indexing="ij", sparse=True)
    vals = np.ones(tuple(g.size for g in grids))
    for x, s, c in zip(mesh, sigmas, centers):
        vals = vals * np.exp(-((x - c) ** 2) / (2 * s**2)) / math.sqrt(
            2 * math.pi * s**2
        )
    return SampledDensity(tuple(grids), vals, "position")


# ---------------------------------------------------------------------------
# density functionals against Gaussian identities


def test_fisher_gaussian_identity():
    dens = gaussian_density((0.8, 1.3), (0.2, -0.4))
    info = fisher_commutative(dens)
    np.testing.assert_allclose(info.axes, [1 / 0.64, 1 / 1.69], rtol=1e-9)
    assert info.total == pytest.approx(1 / 0.64 + 1 / 1.69, rel=1e-9)


def test_shannon_gaussian_identity():
    sigmas = (0.8, 1.3)
    dens = gaussian_density(sigmas, (0.2, -0.4))
    expected = sum(0.5 * (1 + math.log(2 * math.pi * s**2)) for s in sigmas)
    assert shannon(dens) == pytest.approx(expected, rel=1e-12)


def test_moments_gaussian():
    dens = gaussian_density((0.7, 1.1), (0.5, -1.2))
    means, variances = moments(dens)
    np.testing.assert_allclose(means, [0.5, -1.2], atol=1e-12)
    np.testing.assert_allclose(variances, [0.49, 1.21], rtol=1e-12)


def test_unnormalized_density_rejected():
    dens = gaussian_density((1.0, 1.0), (0.0, 0.0))
    bad = SampledDensity(dens.grids, 1.5 * dens.values, "position")
    with pytest.raises(ValueError):
        fisher_commutative(bad)
    with pytest.raises(ValueError):
        shannon(bad)


def test_negative_density_rejected():
    dens = gaussian_density((1.0, 1.0), (0.0, 0.0))
    with pytest.raises(ValueError):
        SampledDensity(dens.grids, dens.values - 1.0, "position")


# ---------------------------------------------------------------------------
# noncommutative Fisher rescaling


def test_fisher_nc_commutative_passthrough():
    fr, fp = fisher_nc([2.0, 2.0], [2.0, 2.0], NCSpace(0.0, 0.0))
    assert fr == 4.0 and fp == 4.0


def test_fisher_nc_2d_hand_value():
    f_r, f_p = 3.577708764, 4.472135955
    fr, fp = fisher_nc([f_r / 2] * 2, [f_p / 2] * 2, NCSpace(1.0, 0.0))
    assert fr == pytest.approx(f_r / (1 + f_r / (4 * f_p)), rel=1e-12)
    assert fr == pytest.approx(2.981423970, rel=1e-9)
    assert fp == pytest.approx(f_p, rel=1e-12)


def test_fisher_nc_3d_commutative():
    fr, fp = fisher_nc([2.0, 2.0, 2.0], [2.0, 2.0, 2.0],
                       NCSpace(0.0, 0.0, dim=3))
    assert fr == 6.0 and fp == 6.0


def test_fisher_nc_3d_uses_planar_axes_only():
    space = NCSpace(1.5, 0.0, dim=3)
    a = fisher_nc([2.0, 2.0, 2.0], [1.0, 1.0, 50.0], space)[0]
    b = fisher_nc([2.0, 2.0, 2.0], [1.0, 1.0, 0.01], space)[0]
    assert a == pytest.approx(b, rel=1e-14)  # axis-3 Fisher must not enter


def test_fisher_nc_dimension_mismatch():
    with pytest.raises(ValueError):
        fisher_nc([1.0, 1.0], [1.0, 1.0, 1.0], NCSpace(0.1, 0.1))


# ---------------------------------------------------------------------------
# closed forms


def test_closed_forms_commutative_2d():
    r = closed_forms(make_cfg(), NCSpace(0.0, 0.0))
    assert r.F_r_nc == pytest.approx(4.0, abs=1e-14)
    assert r.F_p_nc == pytest.approx(4.0, abs=1e-14)
    assert r.S_r_nc == pytest.approx(1 + LN_PI, abs=1e-14)
    assert r.var_r_nc == pytest.approx(1.0, abs=1e-14)
    assert r.cramer_rao_r == pytest.approx(4.0, abs=1e-12)
    assert r.cramer_rao_p == pytest.approx(4.0, abs=1e-12)


def test_closed_forms_theta_one_2d():
    r = closed_forms(make_cfg(), NCSpace(1.0, 0.0))
    assert r.F_r == pytest.approx(3.5777087639996634, rel=1e-12)
    assert r.F_p == pytest.approx(4.47213595499958, rel=1e-12)
    assert r.F_r_nc == pytest.approx(2.98142397, rel=1e-8)
    assert r.S_r_nc == pytest.approx(1 + LN_PI + math.log(math.sqrt(1.25)),
                                     rel=1e-12)
    assert r.S_r_nc == pytest.approx(2.256301661506505, rel=1e-12)


def test_bbm_sum_is_constant_2d_and_3d():
    rng = np.random.default_rng(2)
    for dim in (2, 3):
        for theta, eta in rng.uniform(0.0, 2.0, (20, 2)):
            r = closed_forms(make_cfg(dim), NCSpace(theta, eta, dim=dim))
            assert r.bbm_sum == pytest.approx(dim * (1 + LN_PI), abs=1e-12)
            assert r.S_r_nc + r.S_p_nc == pytest.approx(dim * (1 + LN_PI),
                                                        abs=1e-12)


def test_bbm_sum_tracks_hbar():
    hbar = 2.7
    r = closed_forms(make_cfg(), NCSpace(0.4, 0.9, hbar=hbar))
    assert r.bbm_sum == pytest.approx(2 * (1 + LN_PI + math.log(hbar)), abs=1e-12)
    assert r.S_r_nc + r.S_p_nc == pytest.approx(r.bbm_sum, abs=1e-12)


def test_closed_forms_duality_2d():
    cfg = make_cfg()
    rng = np.random.default_rng(4)
    for theta, eta in rng.uniform(0.0, 2.0, (16, 2)):
        a = closed_forms(cfg, NCSpace(theta, eta))
        b = closed_forms(cfg, NCSpace(eta, theta))
        assert a.F_r_nc == pytest.approx(b.F_p_nc, rel=1e-13)
        assert a.S_r_nc == pytest.approx(b.S_p_nc, rel=1e-13)


def test_closed_forms_3d_commutative():
    r = closed_forms(make_cfg(3), NCSpace(0.0, 0.0, dim=3))
    assert r.F_r_nc == pytest.approx(6.0, abs=1e-14)
    assert r.F_p_nc == pytest.approx(6.0, abs=1e-14)
    assert r.cramer_rao_r == pytest.approx(9.0, abs=1e-12)


def test_cramer_rao_saturated_for_planar_ground_state():
    # the 2D lowest state saturates the noncommutative bound identically
    rng = np.random.default_rng(6)
    for theta, eta in rng.uniform(0.0, 3.0, (16, 2)):
        r = closed_forms(make_cfg(), NCSpace(theta, eta))
        assert r.cramer_rao_r == pytest.approx(4.0, rel=1e-12)
        assert r.cramer_rao_p == pytest.approx(4.0, rel=1e-12)


def test_cramer_rao_3d_bounded_below():
    rng = np.random.default_rng(8)
    for theta, eta in rng.uniform(0.0, 3.0, (16, 2)):
        r = closed_forms(make_cfg(3), NCSpace(theta, eta, dim=3))
        assert r.cramer_rao_r >= 9.0 - 1e-9
        assert r.cramer_rao_p >= 9.0 - 1e-9


def test_closed_forms_match_unfactored_expressions():
    # same quantities with the bracket structure left unsimplified, and with
    # general mass/frequency/hbar so no unit convention can hide an error
    rng = np.random.default_rng(9)
    for _ in range(12):
        m, w0, hbar = rng.uniform(0.3, 3.0, 3)
        theta, eta = rng.uniform(0.0, 2.5, 2)
        cfg = OscillatorConfig(m, w0, 1.0, DriveField.zero(2))
        ct = (m * w0 * theta) ** 2 / (4 * hbar**2)
        ce = eta**2 / (4 * hbar**2 * m**2 * w0**2)

        r2 = closed_forms(cfg, NCSpace(theta, eta, 2, hbar))
        F_r = (4 * m * w0 / hbar) * (1 + ct) ** -0.5 * (1 + ce) ** 0.5 \
            / (1 + ct * (1 + ct) ** -1 * (1 + ce))
        F_p = (4 / (hbar * m * w0)) * (1 + ct) ** 0.5 * (1 + ce) ** -0.5 \
            / (1 + ce * (1 + ct) * (1 + ce) ** -1)
        S_r = 1 + math.log(math.pi) + math.log(
            hbar / (m * w0) * (1 + ct) ** 0.5 * (1 + ce) ** -0.5)
        S_p = 1 + math.log(math.pi) - math.log(
            (1 / (hbar * m * w0)) * (1 + ct) ** 0.5 * (1 + ce) ** -0.5)
        assert r2.F_r_nc == pytest.approx(F_r, rel=1e-13)
        assert r2.F_p_nc == pytest.approx(F_p, rel=1e-13)
        assert r2.S_r_nc == pytest.approx(S_r, rel=1e-13)
        assert r2.S_p_nc == pytest.approx(S_p, rel=1e-13)

        cfg3 = OscillatorConfig(m, w0, 1.0, DriveField.zero(3))
        r3 = closed_forms(cfg3, NCSpace(theta, eta, 3, hbar))
        g = (1 + ct) ** -0.5 * (1 + ce) ** 0.5
        F_r3 = (4 * m * w0 / hbar) * (g + 0.5) \
            / (1 + (m * w0 * theta) ** 2 / (9 * hbar**2) * g * (g + 0.5))
        F_p3 = (4 / (hbar * m * w0)) * (1 / g + 0.5) \
            / (1 + eta**2 / (9 * hbar**2 * m**2 * w0**2) * (1 / g) * (1 / g + 0.5))
        S_r3 = 1.5 + 1.5 * math.log(math.pi) + math.log(
            (hbar / (m * w0)) ** 1.5 * (1 + ct) ** 0.5 * (1 + ce) ** -0.5)
        S_p3 = 1.5 + 1.5 * math.log(math.pi) - math.log(
            (1 / (hbar * m * w0)) ** 1.5 * (1 + ct) ** 0.5 * (1 + ce) ** -0.5)
        assert r3.F_r_nc == pytest.approx(F_r3, rel=1e-13)
        assert r3.F_p_nc == pytest.approx(F_p3, rel=1e-13)
        assert r3.S_r_nc == pytest.approx(S_r3, rel=1e-13)
        assert r3.S_p_nc == pytest.approx(S_p3, rel=1e-13)


# ---------------------------------------------------------------------------
# quadrature route vs closed forms


def quad_report(theta, eta, dim=2, drive=None, t=0.0, **kw):
    cfg = make_cfg(dim, drive)
    system = OscillatorSystem(cfg, NCSpace(theta, eta, dim=dim),
                              window=(0.0, max(t, 0.5) + 0.5))
    return info_from_state(system.state((0,) * dim, t), **kw)


def test_quadrature_matches_closed_2d():
    closed = closed_forms(make_cfg(), NCSpace(1.0, 0.5))
    quad = quad_report(1.0, 0.5)
    for name in REPORT_FIELDS:
        assert getattr(quad, name) == pytest.approx(getattr(closed, name),
                                                    rel=1e-6), name


def test_quadrature_matches_closed_3d():
    closed = closed_forms(make_cfg(3), NCSpace(0.5, 0.5, dim=3))
    quad = quad_report(0.5, 0.5, dim=3)
    for name in REPORT_FIELDS:
        assert getattr(quad, name) == pytest.approx(getattr(closed, name),
                                                    rel=1e-6), name


def test_quadrature_matches_closed_nonnatural_units():
    m, w0, q, hbar = 2.3, 0.7, -1.1, 1.9
    drive = DriveField((SinusoidSignal(0.8, 1.1), ConstantSignal(0.4)))
    cfg = OscillatorConfig(m, w0, q, drive)
    space = NCSpace(0.9, 1.3, hbar=hbar)
    system = OscillatorSystem(cfg, space, window=(0.0, 2.0))
    closed = closed_forms(cfg, space)
    quad = info_from_state(system.state((0, 0), 1.1))
    for name in REPORT_FIELDS:
        assert getattr(quad, name) == pytest.approx(getattr(closed, name),
                                                    rel=1e-6), name
    assert quad.bbm_sum == pytest.approx(2 * (1 + LN_PI + math.log(hbar)),
                                         abs=1e-6)


def test_quadrature_gauge_invariance():
    drive = DriveField((SinusoidSignal(1.0, 2.0), ConstantSignal(0.5)))
    cfg = make_cfg(drive=drive)
    space = NCSpace(1.0, 0.5)
    s1 = OscillatorSystem(cfg, space, window=(0.0, 2.0))
    s2 = OscillatorSystem(cfg, space, window=(0.0, 2.0),
                          init_conditions=[(0.4, -0.3), (-0.2, 0.6)])
    r1 = info_from_state(s1.state((0, 0), 1.3))
    r2 = info_from_state(s2.state((0, 0), 1.3))
    for name in REPORT_FIELDS:
        assert getattr(r1, name) == pytest.approx(getattr(r2, name),
                                                  rel=1e-10), name


def test_quadrature_time_independence():
    drive = DriveField((SinusoidSignal(1.0, 2.0), ConstantSignal(0.5)))
    early = quad_report(0.4, 0.9, drive=drive, t=0.0)
    late = quad_report(0.4, 0.9, drive=drive, t=3.7)
    for name in REPORT_FIELDS:
        assert getattr(late, name) == pytest.approx(getattr(early, name),
                                                    rel=1e-8), name


def test_quadrature_density_is_phase_blind():
    system = OscillatorSystem(make_cfg(), NCSpace(0.3, 0.1), window=(0.0, 1.0))
    plain = info_from_state(system.state((0, 0), 0.7))
    drifted = info_from_state(system.state((0, 0), 0.7, phase_drift=0.35))
    for name in REPORT_FIELDS:
        assert getattr(plain, name) == getattr(drifted, name), name


def test_excited_state_bbm_inequality():
    system = OscillatorSystem(make_cfg(), NCSpace(0.6, 0.3), window=(0.0, 1.0))
    report = info_from_state(system.state((1, 0), 0.0))
    assert report.bbm_sum >= 2 * (1 + LN_PI) - 1e-9
    assert report.bbm_sum > 2 * (1 + LN_PI) + 0.1  # strictly above for n=(1,0)


# ---------------------------------------------------------------------------
# uncertainty floors


def test_uncertainty_floors_trivial_and_theta_one():
    space0 = NCSpace(0.0, 0.0)
    chk0 = nc_uncertainty_bounds(closed_forms(make_cfg(), space0), space0)
    assert chk0.satisfied and chk0.floor_r == 0.0

    space1 = NCSpace(1.0, 0.0)
    report1 = closed_forms(make_cfg(), space1)
    chk1 = nc_uncertainty_bounds(report1, space1)
    assert report1.var_r_nc == pytest.approx(1.341641, abs=1e-6)
    assert chk1.delta_r == pytest.approx(1.158292, abs=1e-6)
    assert chk1.satisfied and chk1.margin_r > 0.15


def test_uncertainty_floor_large_theta_asymptotics():
    ratios = []
    for theta in (1e2, 1e3):
        space = NCSpace(theta, 0.0)
        chk = nc_uncertainty_bounds(closed_forms(make_cfg(), space), space)
        assert chk.satisfied
        ratios.append(chk.delta_r / math.sqrt(theta))
    assert ratios[-1] >= 1.0
    assert ratios[0] == pytest.approx(ratios[1], rel=1e-3)  # ratio saturates


# ---------------------------------------------------------------------------
# report serialization


def test_report_csv_row_schema():
    r = closed_forms(make_cfg(), NCSpace(0.25, 1.5))
    assert InfoReport.CSV_HEADER == (
        "theta,eta,dim,F_r_nc,F_p_nc,S_r_nc,S_p_nc,var_r_nc,var_p_nc,"
        "cr_r,cr_p,bbm_sum,provenance"
    )
    row = r.to_csv_row().split(",")
    assert len(row) == 13
    assert float(row[0]) == 0.25 and float(row[1]) == 1.5
    assert row[2] == "2"
    assert float(row[3]) == pytest.approx(r.F_r_nc, rel=1e-16)
    assert row[-1] == "closed-form"


def test_report_json_round_trip():
    r = closed_forms(make_cfg(3), NCSpace(0.3, 0.7, dim=3))
    data = json.loads(r.to_json())
    assert data["dim"] == 3
    assert data["provenance"] == "closed-form"
    assert data["F_r_nc"] == pytest.approx(r.F_r_nc, rel=1e-15)
    assert len(data["F_p_axes"]) == 3
