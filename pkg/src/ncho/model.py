"""Noncommutative phase-space model: parameters, drives, effective oscillator.

A point charge in a harmonic trap and a time-varying electric field lives on
a phase space where position-position and momentum-momentum commutators pick
up constants theta and eta.  A Bopp shift maps the problem onto an ordinary
commutative oscillator with a dressed mass M, dressed frequency omega1, a
rigid rotation rate omega2 and drive terms that are linear in position and
momentum.  This module holds the parameter containers, the drive signals and
the closed-form maps between bare and effective quantities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "NCSpace",
    "OscillatorConfig",
    "DriveField",
    "Signal",
    "ZeroSignal",
    "ConstantSignal",
    "SinusoidSignal",
    "RampSignal",
    "TabulatedSignal",
    "ScaledSignal",
    "EffectiveParams",
    "DriveCoefficients",
    "RotatingFrameCoefficients",
    "FrameSnapshot",
    "effective_params",
    "drive_coefficients",
    "rotating_frame_coeffs",
    "nc_variances",
]


# ---------------------------------------------------------------------------
# time signals


class Signal:
    """A scalar function of time exposing its value and time derivative.

    Subclasses implement ``value`` and ``derivative``; both accept scalars or
    numpy arrays and return matching shapes.
    """

    def value(self, t):
        raise NotImplementedError

    def derivative(self, t):
        raise NotImplementedError

    def __call__(self, t):
        return self.value(t)


class ConstantSignal(Signal):
    def __init__(self, level: float):
        self.level = float(level)

    def value(self, t):
        t = np.asarray(t, dtype=float)
        return self.level * np.ones_like(t) if t.ndim else self.level

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return np.zeros_like(t) if t.ndim else 0.0


class ZeroSignal(ConstantSignal):
    def __init__(self):
        super().__init__(0.0)


class SinusoidSignal(Signal):
    """amplitude * sin(omega * t + phase)."""

    def __init__(self, amplitude: float, omega: float, phase: float = 0.0):
        self.amplitude = float(amplitude)
        self.omega = float(omega)
        self.phase = float(phase)

    def value(self, t):
        return self.amplitude * np.sin(self.omega * np.asarray(t, float) + self.phase)

    def derivative(self, t):
        return (
            self.amplitude
            * self.omega
            * np.cos(self.omega * np.asarray(t, float) + self.phase)
        )


class RampSignal(Signal):
    """offset + rate * t."""

    def __init__(self, rate: float, offset: float = 0.0):
        self.rate = float(rate)
        self.offset = float(offset)

    def value(self, t):
        return self.offset + self.rate * np.asarray(t, float)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return self.rate * np.ones_like(t) if t.ndim else self.rate


class TabulatedSignal(Signal):
    """Sampled signal with linear interpolation.

    The derivative table is built once with second-order central differences
    (one-sided second-order stencils at the two endpoints) and is itself
    interpolated linearly.  Evaluation outside the tabulated window clamps to
    the end values; callers are expected to keep the simulation window inside
    the table.
    """

    def __init__(self, times, values):
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValueError("times and values must be 1D arrays of equal length")
        if times.size < 3:
            raise ValueError("a tabulated signal needs at least 3 samples")
        if np.any(np.diff(times) <= 0):
            raise ValueError("time stamps must be strictly increasing")
        self.times = times
        self.values = values
        self._dvalues = np.gradient(values, times, edge_order=2)

    def value(self, t):
        return np.interp(np.asarray(t, float), self.times, self.values)

    def derivative(self, t):
        return np.interp(np.asarray(t, float), self.times, self._dvalues)


class ScaledSignal(Signal):
    def __init__(self, base: Signal, factor: float):
        self.base = base
        self.factor = float(factor)

    def value(self, t):
        return self.factor * self.base.value(t)

    def derivative(self, t):
        return self.factor * self.base.derivative(t)


# ---------------------------------------------------------------------------
# configuration containers


@dataclass(frozen=True)
class NCSpace:
    """Noncommutativity parameters and dimensionality.

    theta : float
        Position-position noncommutativity (area units), >= 0.
    eta : float
        Momentum-momentum noncommutativity (momentum^2 units), >= 0.
    dim : int
        Spatial dimension, 2 or 3.  In 3D the noncommutativity is aligned
        with the third axis, so that axis stays commutative.
    hbar : float
        Unit of action, > 0.

    theta = eta = 0 reproduces the ordinary commutative algebra.
    """

    theta: float
    eta: float
    dim: int = 2
    hbar: float = 1.0

    def __post_init__(self):
        if self.theta < 0 or self.eta < 0:
            raise ValueError("theta and eta must be nonnegative")
        if self.dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")


@dataclass(frozen=True)
class DriveField:
    """Per-axis electric-field signals E_l(t)."""

    components: tuple

    def __post_init__(self):
        if len(self.components) not in (2, 3):
            raise ValueError("a drive field has 2 or 3 components")
        for c in self.components:
            if not isinstance(c, Signal):
                raise ValueError("drive components must be Signal instances")

    @staticmethod
    def zero(dim: int) -> "DriveField":
        return DriveField(tuple(ZeroSignal() for _ in range(dim)))

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]


@dataclass(frozen=True)
class OscillatorConfig:
    """Bare oscillator: mass, trap frequency, charge and drive field."""

    mass: float
    omega0: float
    charge: float
    drive: DriveField

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")


@dataclass(frozen=True)
class EffectiveParams:
    """Dressed parameters of the Bopp-shifted oscillator.

    M is the effective mass (M <= m, equality iff theta = 0), omega1 the
    effective trap frequency (omega1 >= omega0, equality iff theta = eta = 0)
    and omega2 the rotation rate that multiplies the angular-momentum
    coupling.  rho_sq = 1/(2 M omega1) is the squared width constant of the
    planar modes; rho3_sq = 1/(2 m omega0) the one of the third axis (only
    meaningful in 3D).
    """

    M: float
    omega1: float
    omega2: float
    rho_sq: float
    rho3_sq: float


def effective_params(cfg: OscillatorConfig, space: NCSpace) -> EffectiveParams:
    """Map bare oscillator parameters to the effective (dressed) ones."""
    m, w0, hbar = cfg.mass, cfg.omega0, space.hbar
    chi_theta = (m * w0 * space.theta) ** 2 / (4.0 * hbar**2)
    chi_eta = space.eta**2 / (4.0 * hbar**2 * m**2 * w0**2)
    M = m / (1.0 + chi_theta)
    omega1 = w0 * math.sqrt((1.0 + chi_theta) * (1.0 + chi_eta))
    omega2 = (space.eta + space.theta * m**2 * w0**2) / (2.0 * hbar * m)
    return EffectiveParams(
        M=M,
        omega1=omega1,
        omega2=omega2,
        rho_sq=1.0 / (2.0 * M * omega1),
        rho3_sq=1.0 / (2.0 * m * w0),
    )


class DriveCoefficients:
    """Momentum-linear (A, B) and position-linear (C, D) drive terms.

    A and B are the momentum couplings induced by the position
    noncommutativity; C and D are the ordinary electric forces.  In 3D the
    third axis keeps a plain force term F(t) = q E_3(t).
    """

    def __init__(self, A: Signal, B: Signal, C: Signal, D: Signal, F=None, dim=2):
        self.A = A
        self.B = B
        self.C = C
        self.D = D
        self.dim = dim
        self._F = F

    @property
    def F(self) -> Signal:
        if self._F is None:
            raise ValueError("the axis-3 drive term F is only defined in 3D")
        return self._F


def drive_coefficients(cfg: OscillatorConfig, space: NCSpace) -> DriveCoefficients:
    """Build the linear drive coefficients of the effective Hamiltonian."""
    if len(cfg.drive) != space.dim:
        raise ValueError(
            f"drive has {len(cfg.drive)} components, space.dim = {space.dim}"
        )
    q, hbar, theta = cfg.charge, space.hbar, space.theta
    e1, e2 = cfg.drive[0], cfg.drive[1]
    scale = q * theta / (2.0 * hbar)
    coeffs = DriveCoefficients(
        A=ScaledSignal(e2, scale),
        B=ScaledSignal(e1, -scale),
        C=ScaledSignal(e1, q),
        D=ScaledSignal(e2, q),
        F=ScaledSignal(cfg.drive[2], q) if space.dim == 3 else None,
        dim=space.dim,
    )
    return coeffs


class FrameSnapshot(NamedTuple):
    Omega1: float
    Omega2: float
    xi1: float
    xi2: float
    dOmega1: float
    dOmega2: float
    dxi1: float
    dxi2: float


class _RotatedSignal(Signal):
    """cos/sin combination of two signals under the rotation angle omega2*t.

    sign=-1 gives a*cos - b*sin, sign=+1 gives a*sin + b*cos.  Derivatives
    follow from the product rule with the constant angle rate omega2.
    """

    def __init__(self, a: Signal, b: Signal, omega2: float, sign: int):
        self.a = a
        self.b = b
        self.omega2 = float(omega2)
        self.sign = sign

    def value(self, t):
        phi = self.omega2 * np.asarray(t, float)
        c, s = np.cos(phi), np.sin(phi)
        if self.sign < 0:
            return self.a.value(t) * c - self.b.value(t) * s
        return self.a.value(t) * s + self.b.value(t) * c

    def derivative(self, t):
        phi = self.omega2 * np.asarray(t, float)
        c, s = np.cos(phi), np.sin(phi)
        da = self.a.derivative(t) - self.omega2 * self.b.value(t)
        db = self.b.derivative(t) + self.omega2 * self.a.value(t)
        if self.sign < 0:
            return da * c - db * s
        return da * s + db * c


class RotatingFrameCoefficients:
    """Drive terms carried into the frame co-rotating at omega2.

    Omega1/Omega2 multiply momentum, xi1/xi2 multiply position; the rotation
    preserves the Euclidean norms Omega1^2 + Omega2^2 = A^2 + B^2 and
    xi1^2 + xi2^2 = C^2 + D^2 at every time.
    """

    def __init__(self, coeffs: DriveCoefficients, omega2: float):
        self.omega2 = float(omega2)
        self.Omega1 = _RotatedSignal(coeffs.A, coeffs.B, omega2, -1)
        self.Omega2 = _RotatedSignal(coeffs.A, coeffs.B, omega2, +1)
        self.xi1 = _RotatedSignal(coeffs.C, coeffs.D, omega2, -1)
        self.xi2 = _RotatedSignal(coeffs.C, coeffs.D, omega2, +1)

    def angle(self, t):
        return self.omega2 * np.asarray(t, float)

    def at(self, t) -> FrameSnapshot:
        return FrameSnapshot(
            Omega1=float(self.Omega1.value(t)),
            Omega2=float(self.Omega2.value(t)),
            xi1=float(self.xi1.value(t)),
            xi2=float(self.xi2.value(t)),
            dOmega1=float(self.Omega1.derivative(t)),
            dOmega2=float(self.Omega2.derivative(t)),
            dxi1=float(self.xi1.derivative(t)),
            dxi2=float(self.xi2.derivative(t)),
        )


def rotating_frame_coeffs(
    coeffs: DriveCoefficients, omega2: float, t: float
) -> FrameSnapshot:
    """Rotated drive terms and their derivatives, evaluated at time t."""
    return RotatingFrameCoefficients(coeffs, omega2).at(t)


def nc_variances(var_x, var_p, space: NCSpace):
    """Total noncommutative variances from per-axis commutative ones.

    var_x, var_p are the per-axis position and momentum variances (length
    space.dim each).  In 2D both axes mix into the corrections; in 3D only
    axes 1 and 2 do, the third axis being commutative.

    Returns (var_r_nc, var_p_nc).
    """
    var_x = np.asarray(var_x, dtype=float)
    var_p = np.asarray(var_p, dtype=float)
    if var_x.shape != (space.dim,) or var_p.shape != (space.dim,):
        raise ValueError(f"expected {space.dim} per-axis variances")
    k_theta = space.theta**2 / (4.0 * space.hbar**2)
    k_eta = space.eta**2 / (4.0 * space.hbar**2)
    planar = slice(0, 2)  # only the noncommutative plane mixes
    var_r_nc = float(var_x.sum() + k_theta * var_p[planar].sum())
    var_p_nc = float(var_p.sum() + k_eta * var_x[planar].sum())
    return var_r_nc, var_p_nc
