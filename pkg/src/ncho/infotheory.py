"""Fisher information, Shannon entropy and the noncommutative bounds.

Commutative Fisher information and Shannon entropy are plain density
functionals evaluated by fourth-order finite differences and trapezoid
quadrature.  On the noncommutative space the variances mix between position
and momentum, so the Fisher definitions are rescaled so that the products
F * variance stay bounded below by dim^2 (the Cramer-Rao form); the Shannon
entropies need no modification and their sum is the constant
dim * (1 + ln(pi) + ln(hbar)) for the lowest-lying state, independent of the
noncommutativity parameters.

Every quantity is available twice: from the published closed forms
(provenance "closed-form") and from quadrature over sampled densities
(provenance "quadrature"); agreement of the two routes is the central
correctness gate of the package.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict, replace

import numpy as np

from .model import NCSpace, OscillatorConfig, effective_params, nc_variances
from .wavefunctions import (
    QuantumState,
    SampledField,
    default_grids,
    evaluate_on_grid,
    momentum_on_grid,
)

__all__ = [
    "SampledDensity",
    "FisherInfo",
    "InfoReport",
    "UncertaintyCheck",
    "fisher_commutative",
    "fisher_nc",
    "shannon",
    "moments",
    "closed_forms",
    "info_from_state",
    "nc_uncertainty_bounds",
]

DENSITY_FLOOR = 1e-300  # guard for 0/0 and 0*log(0) in Gaussian tails
NORM_TOLERANCE = 1e-4


@dataclass(frozen=True)
class SampledDensity:
    """Nonnegative probability density on origin-centered uniform grids."""

    grids: tuple
    values: np.ndarray
    domain: str

    def __post_init__(self):
        if len(self.grids) != self.values.ndim:
            raise ValueError("one grid per density axis required")
        if np.any(self.values < 0):
            raise ValueError("density values must be nonnegative")

    @classmethod
    def from_field(cls, field: SampledField) -> "SampledDensity":
        return cls(field.grids, np.abs(field.values) ** 2, field.domain)

    @property
    def dim(self) -> int:
        return len(self.grids)

    def integral(self) -> float:
        return _integrate(self.values, self.grids)


def _integrate(values: np.ndarray, grids) -> float:
    out = values
    for ax in range(len(grids) - 1, -1, -1):
        out = np.trapezoid(out, grids[ax], axis=ax)
    return float(out)


def _fd4(values: np.ndarray, axis: int, h: float) -> np.ndarray:
    """Fourth-order central first derivative; the stencil treats points
    beyond the boundary as zero, which is exact to the tail level for
    densities that have decayed there."""
    pad = [(0, 0)] * values.ndim
    pad[axis] = (2, 2)
    v = np.pad(values, pad)
    sl = [slice(None)] * values.ndim

    def take(offset):
        s = list(sl)
        n = values.shape[axis]
        s[axis] = slice(2 + offset, 2 + offset + n)
        return v[tuple(s)]

    return (-take(2) + 8.0 * take(1) - 8.0 * take(-1) + take(-2)) / (12.0 * h)


def _check_normalized(density: SampledDensity):
    total = density.integral()
    if abs(total - 1.0) > NORM_TOLERANCE:
        raise ValueError(f"density integral {total} deviates from 1 by more "
                         f"than {NORM_TOLERANCE}")


@dataclass(frozen=True)
class FisherInfo:
    axes: tuple
    total: float


def fisher_commutative(density: SampledDensity) -> FisherInfo:
    """Per-axis and total Fisher information of a sampled density.

    The derivative uses the fourth-order central stencil on the density
    itself; integrand points where the density is below the floor are set
    to zero (both the density and its gradient vanish in the tails).
    """
    _check_normalized(density)
    per_axis = []
    chi = density.values
    safe = np.maximum(chi, DENSITY_FLOOR)
    for ax, grid in enumerate(density.grids):
        d = _fd4(chi, ax, float(grid[1] - grid[0]))
        integrand = np.where(chi > DENSITY_FLOOR, d * d / safe, 0.0)
        per_axis.append(_integrate(integrand, density.grids))
    return FisherInfo(axes=tuple(per_axis), total=float(sum(per_axis)))


def shannon(density: SampledDensity) -> float:
    """Differential Shannon entropy -Integral chi ln chi, with 0 ln 0 -> 0."""
    _check_normalized(density)
    chi = density.values
    integrand = np.where(
        chi > DENSITY_FLOOR, -chi * np.log(np.maximum(chi, DENSITY_FLOOR)), 0.0
    )
    return _integrate(integrand, density.grids)


def moments(density: SampledDensity):
    """Per-axis means and variances by quadrature (via axis marginals)."""
    means, variances = [], []
    for ax, grid in enumerate(density.grids):
        marginal = density.values
        for other in range(density.dim - 1, -1, -1):
            if other != ax:
                marginal = np.trapezoid(marginal, density.grids[other], axis=other)
        mean = float(np.trapezoid(grid * marginal, grid))
        second = float(np.trapezoid(grid**2 * marginal, grid))
        means.append(mean)
        variances.append(second - mean**2)
    return np.asarray(means), np.asarray(variances)


def fisher_nc(fisher_r_axes, fisher_p_axes, space: NCSpace):
    """Noncommutative Fisher information from per-axis commutative values.

    The rescaling is fixed by requiring the Cramer-Rao products to stay
    bounded below by dim^2 with the mixed noncommutative variances.  In 3D
    only the two planar axes of the conjugate domain enter the correction.
    """
    fr = np.asarray(fisher_r_axes, dtype=float)
    fp = np.asarray(fisher_p_axes, dtype=float)
    if fr.shape != (space.dim,) or fp.shape != (space.dim,):
        raise ValueError(f"expected {space.dim} per-axis Fisher components")
    hbar = space.hbar
    F_r, F_p = fr.sum(), fp.sum()
    if space.dim == 2:
        F_r_nc = F_r / (1.0 + space.theta**2 * F_r / (4.0 * hbar**2 * F_p))
        F_p_nc = F_p / (1.0 + space.eta**2 * F_p / (4.0 * hbar**2 * F_r))
    else:
        F_r_nc = F_r / (1.0 + space.theta**2 * F_r / (9.0 * hbar**2 * (fp[0] + fp[1])))
        F_p_nc = F_p / (1.0 + space.eta**2 * F_p / (9.0 * hbar**2 * (fr[0] + fr[1])))
    return float(F_r_nc), float(F_p_nc)


@dataclass(frozen=True)
class InfoReport:
    """All information measures of one configuration, with provenance."""

    theta: float
    eta: float
    dim: int
    provenance: str  # "closed-form" or "quadrature"
    F_r_axes: tuple
    F_p_axes: tuple
    F_r: float
    F_p: float
    F_r_nc: float
    F_p_nc: float
    S_r_nc: float
    S_p_nc: float
    var_r_nc: float
    var_p_nc: float
    cramer_rao_r: float
    cramer_rao_p: float
    bbm_sum: float

    CSV_HEADER = ("theta,eta,dim,F_r_nc,F_p_nc,S_r_nc,S_p_nc,"
                  "var_r_nc,var_p_nc,cr_r,cr_p,bbm_sum,provenance")

    def to_csv_row(self) -> str:
        vals = [self.theta, self.eta]
        row = [repr(float(v)) for v in vals] + [str(self.dim)]
        row += [
            repr(float(v))
            for v in (
                self.F_r_nc, self.F_p_nc, self.S_r_nc, self.S_p_nc,
                self.var_r_nc, self.var_p_nc,
                self.cramer_rao_r, self.cramer_rao_p, self.bbm_sum,
            )
        ]
        row.append(self.provenance)
        return ",".join(row)

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d["F_r_axes"] = list(self.F_r_axes)
        d["F_p_axes"] = list(self.F_p_axes)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def _ground_state_variances(cfg: OscillatorConfig, space: NCSpace):
    """Per-axis commutative ground-state variances (position, momentum)."""
    p = effective_params(cfg, space)
    hbar = space.hbar
    var_x = [p.rho_sq * hbar, p.rho_sq * hbar]
    var_p = [hbar / (4.0 * p.rho_sq), hbar / (4.0 * p.rho_sq)]
    if space.dim == 3:
        var_x.append(p.rho3_sq * hbar)
        var_p.append(hbar / (4.0 * p.rho3_sq))
    return np.asarray(var_x), np.asarray(var_p)


def closed_forms(cfg: OscillatorConfig, space: NCSpace) -> InfoReport:
    """Published closed forms for the lowest-lying state.

    All entries are algebraic in (theta, eta) through the two dimensionless
    combinations chi_theta = (m w0 theta / 2 hbar)^2 and
    chi_eta = (eta / 2 hbar m w0)^2; the entropy sum is exactly
    dim * (1 + ln pi + ln hbar).
    """
    m, w0, hbar = cfg.mass, cfg.omega0, space.hbar
    chi_t = (m * w0 * space.theta) ** 2 / (4.0 * hbar**2)
    chi_e = space.eta**2 / (4.0 * hbar**2 * m**2 * w0**2)
    g_minus = math.sqrt((1.0 + chi_e) / (1.0 + chi_t))  # = M*omega1 / (m*w0)
    g_plus = 1.0 / g_minus

    var_x, var_p = _ground_state_variances(cfg, space)
    f_r_axes = tuple(1.0 / v for v in var_x)
    f_p_axes = tuple(1.0 / v for v in var_p)
    F_r, F_p = float(sum(f_r_axes)), float(sum(f_p_axes))

    if space.dim == 2:
        F_r_nc = (4.0 * m * w0 / hbar) * g_minus / (1.0 + chi_t * g_minus**2)
        F_p_nc = (4.0 / (hbar * m * w0)) * g_plus / (1.0 + chi_e * g_plus**2)
        S_r_nc = 1.0 + math.log(math.pi) + math.log(hbar / (m * w0) * g_plus)
        S_p_nc = 1.0 + math.log(math.pi) - math.log(g_plus / (hbar * m * w0))
    else:
        F_r_nc = (
            (4.0 * m * w0 / hbar)
            * (g_minus + 0.5)
            / (1.0 + (4.0 / 9.0) * chi_t * g_minus * (g_minus + 0.5))
        )
        F_p_nc = (
            (4.0 / (hbar * m * w0))
            * (g_plus + 0.5)
            / (1.0 + (4.0 / 9.0) * chi_e * g_plus * (g_plus + 0.5))
        )
        S_r_nc = 1.5 + 1.5 * math.log(math.pi) + math.log(
            (hbar / (m * w0)) ** 1.5 * g_plus
        )
        S_p_nc = 1.5 + 1.5 * math.log(math.pi) - math.log(
            g_plus / (hbar * m * w0) ** 1.5
        )

    var_r_nc, var_p_nc = nc_variances(var_x, var_p, space)
    return InfoReport(
        theta=space.theta,
        eta=space.eta,
        dim=space.dim,
        provenance="closed-form",
        F_r_axes=f_r_axes,
        F_p_axes=f_p_axes,
        F_r=F_r,
        F_p=F_p,
        F_r_nc=F_r_nc,
        F_p_nc=F_p_nc,
        S_r_nc=S_r_nc,
        S_p_nc=S_p_nc,
        var_r_nc=var_r_nc,
        var_p_nc=var_p_nc,
        cramer_rao_r=F_r_nc * var_r_nc,
        cramer_rao_p=F_p_nc * var_p_nc,
        bbm_sum=space.dim * (1.0 + math.log(math.pi) + math.log(hbar)),
    )


def info_from_state(state: QuantumState, sigmas: float = 8.0,
                    base_points: int | None = None) -> InfoReport:
    """Quadrature route: sample the densities and integrate everything.

    The position density comes from the lab wavefunction on its default
    grid; the momentum density from the semidiscrete Fourier transform onto
    a momentum grid with matched resolution.  For the lowest-lying state the
    result reproduces closed_forms entrywise; excited states give raw
    quadrature outputs.
    """
    space = state.space
    # densities carry no global phase; dropping it up front makes them
    # bitwise independent of the accumulated phase
    state = replace(state, Y=0.0, phase_drift=0.0)
    pos = evaluate_on_grid(state, domain="position", sigmas=sigmas,
                           base_points=base_points)
    chi = SampledDensity.from_field(pos)
    p_grids = default_grids(state, "momentum", sigmas, base_points)
    mom = momentum_on_grid(pos, p_grids, space.hbar)
    theta_density = SampledDensity.from_field(mom)

    f_r = fisher_commutative(chi)
    f_p = fisher_commutative(theta_density)
    s_r = shannon(chi)
    s_p = shannon(theta_density)
    _, var_x = moments(chi)
    _, var_p = moments(theta_density)
    var_r_nc, var_p_nc = nc_variances(var_x, var_p, space)
    F_r_nc, F_p_nc = fisher_nc(f_r.axes, f_p.axes, space)

    return InfoReport(
        theta=space.theta,
        eta=space.eta,
        dim=space.dim,
        provenance="quadrature",
        F_r_axes=f_r.axes,
        F_p_axes=f_p.axes,
        F_r=f_r.total,
        F_p=f_p.total,
        F_r_nc=F_r_nc,
        F_p_nc=F_p_nc,
        S_r_nc=s_r,
        S_p_nc=s_p,
        var_r_nc=var_r_nc,
        var_p_nc=var_p_nc,
        cramer_rao_r=F_r_nc * var_r_nc,
        cramer_rao_p=F_p_nc * var_p_nc,
        bbm_sum=s_r + s_p,
    )


@dataclass(frozen=True)
class UncertaintyCheck:
    """Noncommutative uncertainty floors sqrt(theta) and sqrt(eta)."""

    delta_r: float
    delta_p: float
    floor_r: float
    floor_p: float
    margin_r: float
    margin_p: float
    satisfied: bool


def nc_uncertainty_bounds(report: InfoReport, space: NCSpace,
                          slack: float = 1e-9) -> UncertaintyCheck:
    """Check sqrt(var_r_nc) >= sqrt(theta) and sqrt(var_p_nc) >= sqrt(eta)."""
    delta_r = math.sqrt(report.var_r_nc)
    delta_p = math.sqrt(report.var_p_nc)
    floor_r = math.sqrt(space.theta)
    floor_p = math.sqrt(space.eta)
    margin_r = delta_r - floor_r
    margin_p = delta_p - floor_p
    return UncertaintyCheck(
        delta_r=delta_r,
        delta_p=delta_p,
        floor_r=floor_r,
        floor_p=floor_p,
        margin_r=margin_r,
        margin_p=margin_p,
        satisfied=(margin_r >= -slack) and (margin_p >= -slack),
    )
