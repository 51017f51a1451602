"""Independent numerical oracles for the analytic states.

Nothing here reuses the algebra being checked: the Schrödinger residual
applies the effective Hamiltonian with finite differences and compares
against a numerical time derivative of the state; the invariant expectation
integrates the quadratic invariant against sampled mode functions with a
spectral momentum operator; the comparison harness pits the closed-form
information measures against the quadrature route.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import (
    NCSpace,
    OscillatorConfig,
    Signal,
    drive_coefficients,
    effective_params,
)
from .dynamics import ClassicalTrajectory
from .wavefunctions import (
    OscillatorSystem,
    QuantumState,
    SampledField,
    default_grids,
    evaluate_on_grid,
    mode_eigenfunction,
    momentum_ground,
    momentum_numeric,
)
from .infotheory import closed_forms, info_from_state, nc_uncertainty_bounds

__all__ = [
    "EffectiveHamiltonianSpec",
    "ResidualReport",
    "schrodinger_residual",
    "residual_convergence",
    "invariant_expectation",
    "CheckRow",
    "ComparisonTable",
    "oracle_report",
    "run_verification_suite",
]

RESIDUAL_GRID_POINTS = {2: 256, 3: 128}


@dataclass(frozen=True)
class EffectiveHamiltonianSpec:
    """Coefficients of the Bopp-shifted Hamiltonian in lab coordinates."""

    M: float
    omega1: float
    omega2: float
    A: Signal
    B: Signal
    C: Signal
    D: Signal
    hbar: float
    dim: int
    mass3: float | None = None
    omega3: float | None = None
    F: Signal | None = None

    @classmethod
    def from_config(cls, cfg: OscillatorConfig, space: NCSpace
                    ) -> "EffectiveHamiltonianSpec":
        p = effective_params(cfg, space)
        c = drive_coefficients(cfg, space)
        return cls(
            M=p.M,
            omega1=p.omega1,
            omega2=p.omega2,
            A=c.A,
            B=c.B,
            C=c.C,
            D=c.D,
            hbar=space.hbar,
            dim=space.dim,
            mass3=cfg.mass if space.dim == 3 else None,
            omega3=cfg.omega0 if space.dim == 3 else None,
            F=c.F if space.dim == 3 else None,
        )


@dataclass(frozen=True)
class ResidualReport:
    max_abs: float
    rms: float
    grid_shape: tuple
    dt: float
    state_id: str
    truncation_estimate: float
    grid_flagged: bool


def _fd4_first(values, axis, h):
    pad = [(0, 0)] * values.ndim
    pad[axis] = (2, 2)
    v = np.pad(values, pad)
    n = values.shape[axis]

    def take(offset):
        s = [slice(None)] * values.ndim
        s[axis] = slice(2 + offset, 2 + offset + n)
        return v[tuple(s)]

    return (-take(2) + 8.0 * take(1) - 8.0 * take(-1) + take(-2)) / (12.0 * h)


def _fd4_second(values, axis, h):
    pad = [(0, 0)] * values.ndim
    pad[axis] = (2, 2)
    v = np.pad(values, pad)
    n = values.shape[axis]

    def take(offset):
        s = [slice(None)] * values.ndim
        s[axis] = slice(2 + offset, 2 + offset + n)
        return v[tuple(s)]

    return (
        -take(2) + 16.0 * take(1) - 30.0 * take(0) + 16.0 * take(-1) - take(-2)
    ) / (12.0 * h**2)


def _apply_hamiltonian(ham: EffectiveHamiltonianSpec, grids, psi, t):
    """H psi on the grid with fourth-order finite differences."""
    hbar = ham.hbar
    hs = [float(g[1] - g[0]) for g in grids]
    mesh = np.meshgrid(*grids, indexing="ij", sparse=True)
    x1, x2 = mesh[0], mesh[1]

    d1 = _fd4_first(psi, 0, hs[0])
    d2 = _fd4_first(psi, 1, hs[1])
    lap12 = _fd4_second(psi, 0, hs[0]) + _fd4_second(psi, 1, hs[1])

    out = -(hbar**2) / (2.0 * ham.M) * lap12
    out += 0.5 * ham.M * ham.omega1**2 * (x1**2 + x2**2) * psi
    # angular-momentum coupling L3 = x1 p2 - x2 p1
    out -= ham.omega2 * (-1j * hbar) * (x1 * d2 - x2 * d1)
    out += float(ham.A.value(t)) * (-1j * hbar) * d1
    out += float(ham.B.value(t)) * (-1j * hbar) * d2
    out += float(ham.C.value(t)) * x1 * psi
    out += float(ham.D.value(t)) * x2 * psi
    if ham.dim == 3:
        x3 = mesh[2]
        out += -(hbar**2) / (2.0 * ham.mass3) * _fd4_second(psi, 2, hs[2])
        out += 0.5 * ham.mass3 * ham.omega3**2 * x3**2 * psi
        out += float(ham.F.value(t)) * x3 * psi
    return out


def _interior(values, layers=2):
    sl = tuple(slice(layers, -layers) for _ in range(values.ndim))
    return values[sl]


def schrodinger_residual(
    state: QuantumState,
    ham: EffectiveHamiltonianSpec,
    grids=None,
    sigmas: float = 8.0,
    base_points: int | None = None,
    dt: float = 1e-4,
    flag_tolerance: float = 1e-4,
) -> ResidualReport:
    """Residual i hbar dpsi/dt - H psi, normalized by hbar omega1 max|psi|.

    The time derivative is a second-order central difference of the full
    analytic state at t +- dt; spatial derivatives are fourth-order.  The
    truncation estimate compares H psi on the grid against H psi on the
    2x-decimated grid (Richardson factor 15) and trips ``grid_flagged`` when
    it exceeds ``flag_tolerance``.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if base_points is None:
        base_points = RESIDUAL_GRID_POINTS[state.space.dim]
    if grids is None:
        grids = default_grids(state, "position", sigmas, base_points)
    grids = tuple(np.asarray(g, float) for g in grids)

    psi0 = evaluate_on_grid(state, grids).values
    psi_plus = evaluate_on_grid(state.at_time(state.t + dt), grids).values
    psi_minus = evaluate_on_grid(state.at_time(state.t - dt), grids).values

    dpsi_dt = (psi_plus - psi_minus) / (2.0 * dt)
    h_psi = _apply_hamiltonian(ham, grids, psi0, state.t)
    residual = _interior(1j * ham.hbar * dpsi_dt - h_psi)

    scale = ham.hbar * ham.omega1 * np.abs(psi0).max()
    res = np.abs(residual) / scale
    max_abs = float(res.max())
    rms = float(np.sqrt(np.mean(res**2)))

    dec = tuple(slice(None, None, 2) for _ in range(psi0.ndim))
    grids_dec = tuple(g[::2] for g in grids)
    h_dec = _apply_hamiltonian(ham, grids_dec, psi0[dec], state.t)
    diff = _interior(h_dec - h_psi[dec])
    trunc = float(np.abs(diff).max() / 15.0 / scale)

    return ResidualReport(
        max_abs=max_abs,
        rms=rms,
        grid_shape=psi0.shape,
        dt=dt,
        state_id=f"n={state.quantum_numbers} t={state.t} "
                 f"theta={state.space.theta} eta={state.space.eta}",
        truncation_estimate=trunc,
        grid_flagged=trunc > flag_tolerance,
    )


def _refine(grid, factor):
    n = grid.size
    h = float(grid[1] - grid[0])
    return (np.arange(factor * n) - factor * (n // 2)) * (h / factor)


def residual_convergence(
    state: QuantumState,
    ham: EffectiveHamiltonianSpec,
    sigmas: float = 8.0,
    base_points: int = 128,
    dt: float = 1e-4,
):
    """Measured convergence orders of the residual components.

    Time: compare central differences at dt, dt/2 against a dt/8 reference;
    the gap shrinks by ~4x per halving for a second-order stencil.  Space:
    compare H psi at spacing h, h/2 against an h/4 reference on the common
    points; the gap shrinks by ~16x per halving for fourth-order stencils.
    Returns (order_dt, order_dx).
    """
    grids = default_grids(state, "position", sigmas, base_points)
    t = state.t

    def d_t(delta):
        plus = evaluate_on_grid(state.at_time(t + delta), grids).values
        minus = evaluate_on_grid(state.at_time(t - delta), grids).values
        return (plus - minus) / (2.0 * delta)

    ref = d_t(dt / 8.0)
    e1 = np.abs(d_t(dt) - ref).max()
    e2 = np.abs(d_t(dt / 2.0) - ref).max()
    order_dt = math.log2(e1 / e2)

    fine_grids = [_refine(np.asarray(g), 4) for g in grids]
    psis = {}
    for factor in (1, 2, 4):
        sub = tuple(g[:: 4 // factor] for g in fine_grids)
        psis[factor] = _apply_hamiltonian(
            ham, sub, evaluate_on_grid(state, sub).values, t
        )
    coarse = tuple(slice(None, None, 2) for _ in range(state.space.dim))
    ref_h = psis[4][tuple(slice(None, None, 4) for _ in range(state.space.dim))]
    e1 = np.abs(_interior(psis[1] - ref_h)).max()
    e2 = np.abs(_interior(psis[2][coarse] - ref_h)).max()
    order_dx = math.log2(e1 / e2)
    return order_dt, order_dx


def invariant_expectation(
    n: int,
    rho_sq: float,
    trajectory: ClassicalTrajectory,
    t: float,
    hbar: float,
    sigmas: float = 8.0,
    base_points: int = 4096,
) -> float:
    """Expectation of the quadratic invariant in its n-th mode, over hbar.

    The position part integrates (Q - Qcl)^2 against the sampled density;
    the momentum part goes through the discrete Fourier transform so the
    momentum operator is spectral.  The result is n + 1/2 up to quadrature
    error, independent of time and of the trajectory gauge.  A grid whose
    boundary density has not decayed below 1e-10 of the peak is flagged
    with a RuntimeWarning.
    """
    qcl, _, pcl, _ = trajectory.interpolate(t)
    sigma = math.sqrt(rho_sq * hbar * (2 * n + 1))
    delta = 2.0 * sigmas * sigma / base_points
    half = abs(qcl) + sigmas * sigma
    k = int(math.ceil(half / delta - 1e-12))
    grid = (np.arange(2 * k) - k) * delta

    phi = mode_eigenfunction(n, rho_sq, qcl, pcl, grid, hbar)
    dens = np.abs(phi) ** 2
    if max(dens[0], dens[-1]) > 1e-10 * dens.max():
        warnings.warn("invariant grid too small: boundary density above "
                      "1e-10 of the peak", RuntimeWarning, stacklevel=2)
    q_part = np.trapezoid(dens * (grid - qcl) ** 2, grid)

    field = SampledField((grid,), phi, "position")
    mom = momentum_numeric(field, hbar)
    p_grid = mom.grids[0]
    p_part = np.trapezoid(np.abs(mom.values) ** 2 * (p_grid - pcl) ** 2, p_grid)

    return float((q_part / (4.0 * rho_sq) + rho_sq * p_part) / hbar)


# ---------------------------------------------------------------------------
# comparison harness


@dataclass(frozen=True)
class CheckRow:
    name: str
    value: float
    reference: float
    diff: float
    tol: float
    passed: bool


@dataclass
class ComparisonTable:
    rows: list

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def append(self, name, value, reference, tol, relative=True):
        scale = max(abs(reference), 1e-30) if relative else 1.0
        diff = abs(value - reference) / scale
        self.rows.append(CheckRow(name, float(value), float(reference),
                                  float(diff), float(tol), bool(diff <= tol)))

    def append_bound(self, name, value, bound, slack=0.0):
        """Pass when value >= bound - slack; diff records the margin."""
        margin = value - bound
        self.rows.append(CheckRow(name, float(value), float(bound),
                                  float(margin), float(slack),
                                  bool(margin >= -slack)))

    def summary(self) -> str:
        width = max((len(r.name) for r in self.rows), default=4)
        lines = []
        for r in self.rows:
            status = "PASS" if r.passed else "FAIL"
            lines.append(
                f"{status}  {r.name:<{width}}  value={r.value:.12g}  "
                f"ref={r.reference:.12g}  diff={r.diff:.3e}  tol={r.tol:.1e}"
            )
        verdict = "all checks passed" if self.all_passed else "FAILURES present"
        lines.append(f"-- {len(self.rows)} checks: {verdict}")
        return "\n".join(lines)

    def to_csv(self, path):
        with open(path, "w", newline="\n") as fh:
            fh.write("name,value,reference,diff,tol,passed\n")
            for r in self.rows:
                fh.write(f"{r.name},{r.value!r},{r.reference!r},"
                         f"{r.diff!r},{r.tol!r},{int(r.passed)}\n")


_REPORT_FIELDS = (
    "F_r", "F_p", "F_r_nc", "F_p_nc", "S_r_nc", "S_p_nc",
    "var_r_nc", "var_p_nc", "cramer_rao_r", "cramer_rao_p", "bbm_sum",
)


def oracle_report(
    cfg: OscillatorConfig,
    space: NCSpace,
    t: float = 0.0,
    system: OscillatorSystem | None = None,
    sigmas: float = 8.0,
    base_points: int | None = None,
    tol: float = 1e-6,
    label: str = "",
) -> ComparisonTable:
    """Closed forms versus quadrature for the lowest-lying state, plus
    normalization, Parseval and transform checks.  Failures are data, not
    exceptions."""
    if system is None:
        system = OscillatorSystem(cfg, space, window=(0.0, max(t, 0.5) + 0.5))
    state = system.state((0,) * space.dim, t)
    closed = closed_forms(cfg, space)
    quad = info_from_state(state, sigmas=sigmas, base_points=base_points)

    table = ComparisonTable(rows=[])
    prefix = f"{label}:" if label else ""
    for name in _REPORT_FIELDS:
        table.append(f"{prefix}{name}", getattr(quad, name),
                     getattr(closed, name), tol)

    # wide grid so the transform comparison is not truncation limited
    pos = evaluate_on_grid(state, domain="position", sigmas=12.0)
    table.append(f"{prefix}norm", pos.discrete_norm(), 1.0, 1e-9)
    mom = momentum_numeric(pos, space.hbar)
    parseval = mom.discrete_norm() ** 2
    table.append(f"{prefix}parseval", parseval, pos.discrete_norm() ** 2, 1e-10)
    mesh = np.meshgrid(*mom.grids, indexing="ij", sparse=True)
    closed_mom = momentum_ground(state, mesh)
    max_diff = float(np.abs(mom.values - closed_mom).max())
    table.append(f"{prefix}fft_vs_closed", max_diff, 0.0, 1e-8, relative=False)
    return table


def _monotone_rows(table: ComparisonTable, space_proto: NCSpace,
                   cfg: OscillatorConfig, n_points: int = 20):
    """Strict monotonicity of the closed forms along rays in theta and eta."""
    expectations = {
        # (vary, quantity): +1 strictly increasing, -1 strictly decreasing
        ("theta", "F_r_nc"): -1,
        ("theta", "S_r_nc"): +1,
        ("theta", "F_p_nc"): +1,
        ("theta", "S_p_nc"): -1,
        ("eta", "F_r_nc"): +1,
        ("eta", "S_r_nc"): -1,
        ("eta", "F_p_nc"): -1,
        ("eta", "S_p_nc"): +1,
    }
    ray = np.linspace(0.0, 2.0, n_points)
    fixed = 1.0
    for vary in ("theta", "eta"):
        reports = []
        for v in ray:
            theta, eta = (v, fixed) if vary == "theta" else (fixed, v)
            reports.append(closed_forms(
                cfg, NCSpace(theta, eta, space_proto.dim, space_proto.hbar)))
        for quantity in ("F_r_nc", "S_r_nc", "F_p_nc", "S_p_nc"):
            sign = expectations[(vary, quantity)]
            seq = np.array([getattr(r, quantity) for r in reports])
            worst = float((sign * np.diff(seq)).min())
            table.append_bound(f"monotone:{quantity}_vs_{vary}", worst, 0.0)


def run_verification_suite(
    cfg: OscillatorConfig,
    space: NCSpace,
    t: float = 0.5,
    perturb_phase: float = 0.0,
    sigmas: float = 8.0,
    base_points: int | None = None,
) -> ComparisonTable:
    """The end-to-end oracle suite used by the command-line verifier."""
    t_res = max(t, 0.5)
    system = OscillatorSystem(cfg, space, window=(0.0, t_res + 0.5))
    table = oracle_report(cfg, space, t=t, system=system,
                          sigmas=sigmas, base_points=base_points, label="oracle")

    ham = EffectiveHamiltonianSpec.from_config(cfg, space)
    state = system.state((0,) * space.dim, t_res, phase_drift=perturb_phase)
    res_tol = 1e-4 if space.dim == 2 else 1e-3
    report = schrodinger_residual(state, ham, flag_tolerance=res_tol)
    table.append("residual:normalized_max", report.max_abs, 0.0, res_tol,
                 relative=False)
    table.rows.append(CheckRow("residual:grid_resolved",
                               report.truncation_estimate, 0.0,
                               report.truncation_estimate, res_tol,
                               not report.grid_flagged))

    for n in range(4):
        value = invariant_expectation(
            n, system.params.rho_sq, system.trajectories[0], t_res, space.hbar
        )
        table.append(f"invariant:n={n}", value, n + 0.5, 1e-7, relative=False)

    closed = closed_forms(cfg, space)
    bounds = nc_uncertainty_bounds(closed, space)
    table.append_bound("floor:delta_r_vs_sqrt_theta", bounds.margin_r, 0.0, 1e-9)
    table.append_bound("floor:delta_p_vs_sqrt_eta", bounds.margin_p, 0.0, 1e-9)

    d_sq = float(space.dim**2)
    for theta in (0.0, space.theta, 2.0):
        for eta in (0.0, space.eta, 2.0):
            rep = closed_forms(cfg, NCSpace(theta, eta, space.dim, space.hbar))
            table.append_bound(
                f"cramer_rao_r:theta={theta},eta={eta}",
                rep.cramer_rao_r, d_sq, 1e-6)
            table.append_bound(
                f"cramer_rao_p:theta={theta},eta={eta}",
                rep.cramer_rao_p, d_sq, 1e-6)

    _monotone_rows(table, space, cfg)
    return table
