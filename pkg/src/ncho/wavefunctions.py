"""Exact time-dependent states of the driven noncommutative oscillator.

The rotated effective Hamiltonian decouples into one quadratic mode per
axis.  Each mode has Gaussian-Hermite eigenfunctions of the dynamical
invariant, centered on the classical particular trajectory, and the full
solution in lab coordinates is the product of the modes evaluated at
rotated arguments times the accumulated phase.  This module evaluates those
states pointwise and on tensor grids, provides the closed-form ground-state
momentum representation, and converts sampled fields between position and
momentum domains with the symmetric Fourier convention

    Xi(p) = (2 pi hbar)^(-D/2) * Integral psi(r) exp(-i p.r / hbar) d^D r.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .model import (
    EffectiveParams,
    NCSpace,
    OscillatorConfig,
    RotatingFrameCoefficients,
    ZeroSignal,
    drive_coefficients,
    effective_params,
)
from .dynamics import (
    QuadraticHamiltonianCoeffs,
    phase_Y,
    solve_particular,
)

__all__ = [
    "HERMITE_CAP",
    "hermite",
    "mode_eigenfunction",
    "LabFrameShifts",
    "OscillatorSystem",
    "QuantumState",
    "psi_lab",
    "psi_rotated_product",
    "momentum_ground",
    "SampledField",
    "default_grids",
    "evaluate_on_grid",
    "momentum_numeric",
    "position_numeric",
    "momentum_on_grid",
]

HERMITE_CAP = 30  # double precision is ample up to here
DEFAULT_GRID_POINTS = {2: 512, 3: 144}
MAX_GRID_POINTS = 2**26


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x) by upward recurrence."""
    if n < 0 or int(n) != n:
        raise ValueError("Hermite order must be a nonnegative integer")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else 1.0
    h = 2.0 * x
    for k in range(1, n):
        h, h_prev = 2.0 * x * h - 2.0 * k * h_prev, h
    return h if h.ndim else float(h)


def mode_eigenfunction(n: int, rho_sq: float, Qcl: float, Pcl: float, Q, hbar: float):
    """Normalized invariant eigenfunction of one quadratic mode.

    A Gaussian of variance rho_sq*hbar centered at the classical position
    Qcl, carrying the plane-wave factor exp(i Pcl Q / hbar) and the Hermite
    polynomial of the shifted, scaled coordinate.
    """
    if rho_sq <= 0:
        raise ValueError("rho_sq must be positive")
    Q = np.asarray(Q, dtype=float)
    width_sq = 2.0 * rho_sq * hbar
    norm = (1.0 / (math.pi * width_sq)) ** 0.25 / math.sqrt(2.0**n * math.factorial(n))
    u = (Q - Qcl) / math.sqrt(width_sq)
    val = norm * np.exp(1j * Pcl * Q / hbar - 0.5 * u * u)
    if n:
        val = val * hermite(n, u)
    return val


@dataclass(frozen=True)
class LabFrameShifts:
    """Classical centers expressed in lab coordinates at one time.

    (f, g) are the momentum centers and (T, sigma) the position centers of
    the two planar axes; q3/p3 carry the third axis in 3D (None in 2D).
    Rotation preserves f^2 + g^2 and T^2 + sigma^2.
    """

    f: float
    g: float
    T: float
    sigma: float
    q3: float | None = None
    p3: float | None = None


@dataclass(frozen=True)
class QuantumState:
    """One exact eigenstate of the dynamical invariant at a fixed time."""

    quantum_numbers: tuple
    t: float
    cfg: OscillatorConfig
    space: NCSpace
    params: EffectiveParams
    phi: float
    shifts: LabFrameShifts
    Y: float
    traj_values: tuple  # ((Q1,P1), (Q2,P2)[, (Q3,P3)]) at time t
    system: "OscillatorSystem"
    phase_drift: float = 0.0

    def at_time(self, t: float) -> "QuantumState":
        return self.system.state(self.quantum_numbers, t, self.phase_drift)

    @property
    def total_phase(self) -> float:
        return self.Y + self.phase_drift * self.t


class OscillatorSystem:
    """Wires parameters, drive terms, rotated-frame modes and trajectories.

    Solving happens once at construction on the window [0, t_max] with the
    given RK4 step; states at any time inside the window are then cheap.
    ``init_conditions`` optionally fixes the particular-solution gauge per
    axis as phase-space starts (Q0, P0); the default is all zeros.
    """

    def __init__(
        self,
        cfg: OscillatorConfig,
        space: NCSpace,
        window: tuple[float, float] = (0.0, 1.0),
        step: float = 1e-3,
        init_conditions=None,
    ):
        if window[0] != 0.0:
            raise ValueError("the window must start at t = 0 (phases accumulate from 0)")
        self.cfg = cfg
        self.space = space
        self.window = (float(window[0]), float(window[1]))
        self.params = effective_params(cfg, space)
        self.coeffs = drive_coefficients(cfg, space)
        self.frame = RotatingFrameCoefficients(self.coeffs, self.params.omega2)

        p = self.params
        axes = [
            QuadraticHamiltonianCoeffs(
                1.0 / (2.0 * p.M), p.M * p.omega1**2 / 2.0, self.frame.Omega1, self.frame.xi1
            ),
            QuadraticHamiltonianCoeffs(
                1.0 / (2.0 * p.M), p.M * p.omega1**2 / 2.0, self.frame.Omega2, self.frame.xi2
            ),
        ]
        if space.dim == 3:
            axes.append(
                QuadraticHamiltonianCoeffs(
                    1.0 / (2.0 * cfg.mass),
                    cfg.mass * cfg.omega0**2 / 2.0,
                    ZeroSignal(),
                    self.coeffs.F,
                )
            )
        self.axis_coeffs = tuple(axes)

        if init_conditions is None:
            init_conditions = [(0.0, 0.0)] * space.dim
        if len(init_conditions) != space.dim:
            raise ValueError("need one initial-condition tuple per axis")
        self.trajectories = tuple(
            solve_particular(c, self.window, step, init=ic, axis=f"axis{i + 1}")
            for i, (c, ic) in enumerate(zip(self.axis_coeffs, init_conditions))
        )

    def shifts_at(self, t: float) -> LabFrameShifts:
        q1, _, p1, _ = self.trajectories[0].interpolate(t)
        q2, _, p2, _ = self.trajectories[1].interpolate(t)
        phi = self.params.omega2 * t
        c, s = math.cos(phi), math.sin(phi)
        q3 = p3 = None
        if self.space.dim == 3:
            q3, _, p3, _ = self.trajectories[2].interpolate(t)
        return LabFrameShifts(
            f=p1 * c + p2 * s,
            g=-p1 * s + p2 * c,
            T=q1 * c + q2 * s,
            sigma=-q1 * s + q2 * c,
            q3=q3,
            p3=p3,
        )

    def state(self, quantum_numbers, t: float, phase_drift: float = 0.0) -> QuantumState:
        ns = tuple(int(n) for n in quantum_numbers)
        if len(ns) != self.space.dim:
            raise ValueError(f"need {self.space.dim} quantum numbers")
        if any(n < 0 for n in ns):
            raise ValueError("quantum numbers must be nonnegative")
        if any(n > HERMITE_CAP for n in ns):
            raise ValueError(f"quantum numbers capped at {HERMITE_CAP}")
        if not (self.window[0] <= t <= self.window[1]):
            raise ValueError(f"t = {t} outside solved window {self.window}")
        traj_values = []
        for traj in self.trajectories:
            q, _, p, _ = traj.interpolate(t)
            traj_values.append((q, p))
        return QuantumState(
            quantum_numbers=ns,
            t=float(t),
            cfg=self.cfg,
            space=self.space,
            params=self.params,
            phi=self.params.omega2 * t,
            shifts=self.shifts_at(t),
            Y=phase_Y(ns, self.axis_coeffs, self.trajectories, t, self.space.hbar).Y,
            traj_values=tuple(traj_values),
            system=self,
            phase_drift=float(phase_drift),
        )


def _norm_prefactor(state: QuantumState) -> float:
    hbar = state.space.hbar
    widths = [state.params.rho_sq, state.params.rho_sq]
    if state.space.dim == 3:
        widths.append(state.params.rho3_sq)
    pref = 1.0
    for n, rho_sq in zip(state.quantum_numbers, widths):
        pref *= (1.0 / (2.0 * rho_sq * hbar * math.pi)) ** 0.25
        pref /= math.sqrt(2.0**n * math.factorial(n))
    return pref


def psi_lab(state: QuantumState, points):
    """Lab-frame wavefunction at the given coordinates.

    ``points`` is a sequence of dim broadcastable arrays (x1, x2[, x3]).
    The planar Gaussians carry the lab-frame centers (T, sigma) and momentum
    factors (f, g); the Hermite factors act on the rotated coordinates
    shifted by the classical positions of the two modes.
    """
    if len(points) != state.space.dim:
        raise ValueError(f"expected {state.space.dim} coordinate arrays")
    x1 = np.asarray(points[0], dtype=float)
    x2 = np.asarray(points[1], dtype=float)
    hbar = state.space.hbar
    rho_sq = state.params.rho_sq
    width_sq = 2.0 * rho_sq * hbar
    sh = state.shifts
    c, s = math.cos(state.phi), math.sin(state.phi)
    n1, n2 = state.quantum_numbers[0], state.quantum_numbers[1]

    val = _norm_prefactor(state) * np.exp(1j * state.total_phase) * np.exp(
        1j * sh.f * x1 / hbar - (x1 - sh.T) ** 2 / (2.0 * width_sq)
    )
    val = val * np.exp(1j * sh.g * x2 / hbar - (x2 - sh.sigma) ** 2 / (2.0 * width_sq))
    if n1:
        q1cl = state.traj_values[0][0]
        val = val * hermite(n1, (c * x1 - s * x2 - q1cl) / math.sqrt(width_sq))
    if n2:
        q2cl = state.traj_values[1][0]
        val = val * hermite(n2, (s * x1 + c * x2 - q2cl) / math.sqrt(width_sq))
    if state.space.dim == 3:
        x3 = np.asarray(points[2], dtype=float)
        rho3_sq = state.params.rho3_sq
        q3, p3 = state.traj_values[2]
        val = val * np.exp(
            1j * p3 * x3 / hbar - (x3 - q3) ** 2 / (4.0 * rho3_sq * hbar)
        )
        n3 = state.quantum_numbers[2]
        if n3:
            val = val * hermite(n3, (x3 - q3) / math.sqrt(2.0 * rho3_sq * hbar))
    return val


def psi_rotated_product(state: QuantumState, points):
    """Same state assembled as the product of mode eigenfunctions evaluated
    at rotated coordinates.  Agrees with psi_lab pointwise by construction;
    kept as an independent evaluation path for consistency checks."""
    if len(points) != state.space.dim:
        raise ValueError(f"expected {state.space.dim} coordinate arrays")
    x1 = np.asarray(points[0], dtype=float)
    x2 = np.asarray(points[1], dtype=float)
    c, s = math.cos(state.phi), math.sin(state.phi)
    Q1 = c * x1 - s * x2
    Q2 = s * x1 + c * x2
    hbar = state.space.hbar
    (q1, p1), (q2, p2) = state.traj_values[0], state.traj_values[1]
    val = np.exp(1j * state.total_phase)
    val = val * mode_eigenfunction(
        state.quantum_numbers[0], state.params.rho_sq, q1, p1, Q1, hbar
    )
    val = val * mode_eigenfunction(
        state.quantum_numbers[1], state.params.rho_sq, q2, p2, Q2, hbar
    )
    if state.space.dim == 3:
        q3, p3 = state.traj_values[2]
        val = val * mode_eigenfunction(
            state.quantum_numbers[2],
            state.params.rho3_sq,
            q3,
            p3,
            np.asarray(points[2], dtype=float),
            hbar,
        )
    return val


def momentum_ground(state: QuantumState, points):
    """Closed-form momentum wavefunction of the lowest-lying state.

    Per planar axis a Gaussian of variance hbar/(4 rho_sq) centered at the
    classical momentum (f or g), carrying the conjugate phase; the third
    axis uses rho3_sq in 3D.  Raises for any nonzero quantum number (use
    momentum_numeric for excited states).
    """
    if any(state.quantum_numbers):
        raise ValueError("closed form only exists for the ground state; "
                         "use momentum_numeric")
    if len(points) != state.space.dim:
        raise ValueError(f"expected {state.space.dim} coordinate arrays")
    p1 = np.asarray(points[0], dtype=float)
    p2 = np.asarray(points[1], dtype=float)
    hbar = state.space.hbar
    rho_sq = state.params.rho_sq
    sh = state.shifts

    val = math.sqrt(2.0 * rho_sq / (hbar * math.pi)) * np.exp(1j * state.total_phase)
    val = val * np.exp(
        -1j * sh.T * (p1 - sh.f) / hbar - rho_sq * (p1 - sh.f) ** 2 / hbar
    )
    val = val * np.exp(
        -1j * sh.sigma * (p2 - sh.g) / hbar - rho_sq * (p2 - sh.g) ** 2 / hbar
    )
    if state.space.dim == 3:
        p3 = np.asarray(points[2], dtype=float)
        rho3_sq = state.params.rho3_sq
        val = val * (2.0 * rho3_sq / (hbar * math.pi)) ** 0.25 * np.exp(
            -1j * sh.q3 * (p3 - sh.p3) / hbar - rho3_sq * (p3 - sh.p3) ** 2 / hbar
        )
    return val


# ---------------------------------------------------------------------------
# sampled fields and grids


@dataclass(frozen=True)
class SampledField:
    """Complex field sampled on origin-centered uniform per-axis grids."""

    grids: tuple
    values: np.ndarray
    domain: str  # "position" or "momentum"
    warnings: tuple = ()

    def __post_init__(self):
        if self.domain not in ("position", "momentum"):
            raise ValueError("domain must be 'position' or 'momentum'")
        if len(self.grids) != self.values.ndim:
            raise ValueError("one grid per value axis required")

    @property
    def spacings(self) -> tuple:
        return tuple(float(g[1] - g[0]) for g in self.grids)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacings))

    def discrete_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.cell_volume))

    def to_csv(self, path):
        coords = np.meshgrid(*self.grids, indexing="ij")
        flat = [c.ravel() for c in coords]
        re = self.values.real.ravel()
        im = self.values.imag.ravel()
        names = ",".join(f"x{i + 1}" for i in range(len(self.grids)))
        with open(path, "w", newline="\n") as fh:
            fh.write(f"# domain={self.domain} dim={len(self.grids)} "
                     f"norm={self.discrete_norm()!r}\n")
            fh.write(f"{names},re,im\n")
            for row in zip(*flat, re, im):
                fh.write(",".join(repr(float(v)) for v in row) + "\n")

    # binary layout (little-endian): magic 'NCSF', u32 version, u8 domain
    # (0 position / 1 momentum), u8 dim, u16 pad; per axis u64 npoints,
    # f64 spacing, f64 first grid value; then float64 (re, im) pairs in
    # C order.
    def to_binary(self, path):
        dim = len(self.grids)
        with open(path, "wb") as fh:
            fh.write(struct.pack("<4sIBBH", b"NCSF", 1,
                                 0 if self.domain == "position" else 1, dim, 0))
            for g in self.grids:
                fh.write(struct.pack("<Qdd", g.size, float(g[1] - g[0]), float(g[0])))
            inter = np.empty(self.values.size * 2, dtype="<f8")
            inter[0::2] = self.values.real.ravel()
            inter[1::2] = self.values.imag.ravel()
            fh.write(inter.tobytes())

    @classmethod
    def from_binary(cls, path) -> "SampledField":
        with open(path, "rb") as fh:
            magic, version, dom, dim, _ = struct.unpack("<4sIBBH", fh.read(12))
            if magic != b"NCSF" or version != 1:
                raise ValueError("not a sampled-field file")
            grids = []
            shape = []
            for _ in range(dim):
                n, spacing, first = struct.unpack("<Qdd", fh.read(24))
                grids.append(first + spacing * np.arange(n))
                shape.append(n)
            raw = np.frombuffer(fh.read(), dtype="<f8")
            vals = (raw[0::2] + 1j * raw[1::2]).reshape(shape)
        return cls(tuple(grids), vals, "position" if dom == 0 else "momentum")


def _axis_sigmas(state: QuantumState, domain: str):
    """Per-axis Gaussian widths, inflated for excited quantum numbers."""
    hbar = state.space.hbar
    rho_sq, rho3_sq = state.params.rho_sq, state.params.rho3_sq
    if domain == "position":
        base = [math.sqrt(rho_sq * hbar)] * 2
        if state.space.dim == 3:
            base.append(math.sqrt(rho3_sq * hbar))
    else:
        base = [math.sqrt(hbar / (4.0 * rho_sq))] * 2
        if state.space.dim == 3:
            base.append(math.sqrt(hbar / (4.0 * rho3_sq)))
    # rotation mixes the planar Hermite factors, so widen both planar axes
    # by the larger planar quantum number
    n12 = max(state.quantum_numbers[0], state.quantum_numbers[1])
    factors = [math.sqrt(2 * n12 + 1)] * 2
    if state.space.dim == 3:
        factors.append(math.sqrt(2 * state.quantum_numbers[2] + 1))
    return [b * f for b, f in zip(base, factors)]


def _axis_centers(state: QuantumState, domain: str):
    sh = state.shifts
    if domain == "position":
        centers = [sh.T, sh.sigma] + ([sh.q3] if state.space.dim == 3 else [])
    else:
        centers = [sh.f, sh.g] + ([sh.p3] if state.space.dim == 3 else [])
    return centers


def default_grids(state: QuantumState, domain: str = "position",
                  sigmas: float = 8.0, base_points: int | None = None):
    """Origin-centered per-axis grids covering center +- sigmas widths.

    The spacing is fixed by ``base_points`` across the +-sigmas window of
    the undisplaced Gaussian, and the extent grows with the classical
    center, so quadrature accuracy does not depend on where the drive has
    pushed the packet.
    """
    if base_points is None:
        base_points = DEFAULT_GRID_POINTS[state.space.dim]
    grids = []
    for sigma, center in zip(_axis_sigmas(state, domain), _axis_centers(state, domain)):
        delta = 2.0 * sigmas * sigma / base_points
        half = abs(center) + sigmas * sigma
        k = int(math.ceil(half / delta - 1e-12))
        grids.append((np.arange(2 * k) - k) * delta)
    return grids


def evaluate_on_grid(state: QuantumState, grids=None, domain: str = "position",
                     sigmas: float = 8.0, base_points: int | None = None,
                     max_points: int = MAX_GRID_POINTS) -> SampledField:
    """Sample the state on a tensor grid.

    In the position domain any state is supported; in the momentum domain
    only the ground state has a closed form (excited states go through
    momentum_numeric on a position sample).
    """
    if grids is None:
        grids = default_grids(state, domain, sigmas, base_points)
    grids = tuple(np.asarray(g, dtype=float) for g in grids)
    if len(grids) != state.space.dim:
        raise ValueError(f"expected {state.space.dim} grids")
    total = math.prod(g.size for g in grids)
    if total > max_points:
        raise MemoryError(f"grid of {total} points exceeds the cap {max_points}")
    mesh = np.meshgrid(*grids, indexing="ij", sparse=True)
    if domain == "position":
        values = psi_lab(state, mesh)
    else:
        values = momentum_ground(state, mesh)
    values = np.broadcast_to(values, tuple(g.size for g in grids)).copy()
    return SampledField(grids, values, domain)


def _centered_fft(values, inverse=False):
    shifted = np.fft.ifftshift(values)
    out = np.fft.ifftn(shifted) if inverse else np.fft.fftn(shifted)
    return np.fft.fftshift(out)


def _boundary_decayed(values, rel=1e-12):
    peak = np.abs(values).max()
    if peak == 0:
        return True
    for ax in range(values.ndim):
        first = np.abs(np.take(values, 0, axis=ax)).max()
        last = np.abs(np.take(values, -1, axis=ax)).max()
        if max(first, last) > rel * peak:
            return False
    return True


def momentum_numeric(field: SampledField, hbar: float) -> SampledField:
    """Discrete Fourier transform of a position sample onto the conjugate
    momentum grid (spacing 2 pi hbar / (N dx) per axis).

    Insufficient boundary decay (amplitude above 1e-12 of the peak on any
    face) is recorded as a truncation warning on the result.
    """
    if field.domain != "position":
        raise ValueError("momentum_numeric expects a position-domain field")
    warnings = list(field.warnings)
    if not _boundary_decayed(field.values):
        warnings.append("domain-truncation: field not decayed at the grid boundary")
    dim = len(field.grids)
    scale = field.cell_volume / (2.0 * math.pi * hbar) ** (dim / 2.0)
    values = _centered_fft(field.values) * scale
    grids = tuple(
        2.0 * math.pi * hbar * np.fft.fftshift(np.fft.fftfreq(g.size, d))
        for g, d in zip(field.grids, field.spacings)
    )
    return SampledField(grids, values, "momentum", tuple(warnings))


def position_numeric(field: SampledField, hbar: float) -> SampledField:
    """Inverse transform (sign-flipped kernel) back to the position domain."""
    if field.domain != "momentum":
        raise ValueError("position_numeric expects a momentum-domain field")
    warnings = list(field.warnings)
    if not _boundary_decayed(field.values):
        warnings.append("domain-truncation: field not decayed at the grid boundary")
    dim = len(field.grids)
    npts = math.prod(g.size for g in field.grids)
    scale = npts * field.cell_volume / (2.0 * math.pi * hbar) ** (dim / 2.0)
    values = _centered_fft(field.values, inverse=True) * scale
    grids = tuple(
        2.0 * math.pi * hbar * np.fft.fftshift(np.fft.fftfreq(g.size, d))
        for g, d in zip(field.grids, field.spacings)
    )
    return SampledField(grids, values, "position", tuple(warnings))


def momentum_on_grid(field: SampledField, grids, hbar: float) -> SampledField:
    """Fourier transform of a position sample onto arbitrary centered
    momentum grids (semidiscrete transform; trapezoid weights in position).

    Unlike momentum_numeric, the output resolution is decoupled from the
    position extent, which the information-measure quadratures need.
    """
    if field.domain != "position":
        raise ValueError("momentum_on_grid expects a position-domain field")
    grids = tuple(np.asarray(g, dtype=float) for g in grids)
    dim = len(field.grids)
    if len(grids) != dim:
        raise ValueError("one momentum grid per axis required")
    kernels = []
    for x, dx, p in zip(field.grids, field.spacings, grids):
        w = np.full(x.size, dx)
        w[0] *= 0.5
        w[-1] *= 0.5
        kernels.append(np.exp(-1j * np.outer(p, x) / hbar) * w)
    scale = (2.0 * math.pi * hbar) ** (-dim / 2.0)
    # contract one axis at a time; tensordot lowers to complex GEMMs.  Each
    # pass consumes the leading axis and appends the transformed one, so
    # after dim passes the axis order is back to (p1, ..., pD).
    values = field.values
    for kernel in kernels:
        values = np.tensordot(values, kernel, axes=([0], [1]))
    return SampledField(grids, values * scale, "momentum", field.warnings)
