"""Classical particular trajectories and the accumulated quantum phase.

Each decoupled mode of the rotated effective Hamiltonian

    H = beta1 * P^2 + beta2 * Q^2 + beta3(t) * P + beta4(t) * Q

with constant beta1, beta2 > 0 carries a particular classical phase-space
solution (Q_p, P_p) obeying Hamilton's equations, whose components satisfy
the driven-oscillator forms

    Q'' + 4 beta1 beta2 Q = -2 beta1 beta4(t) + beta3'(t)
    P'' + 4 beta1 beta2 P = -2 beta2 beta3(t) - beta4'(t)

a constant width parameter rho = (beta1 / 4 beta2)^(1/4), and a phase that
accumulates a secular term plus an action integral along the trajectory.
The phase-space start (Q_p(0), P_p(0)) is a gauge choice: it translates the
wavepacket center and shifts phases but leaves every probability density
and information measure unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Signal

__all__ = [
    "QuadraticHamiltonianCoeffs",
    "ClassicalTrajectory",
    "PhaseValue",
    "solve_particular",
    "rho_constant",
    "phase_Y",
    "ode_residual",
]


@dataclass(frozen=True)
class QuadraticHamiltonianCoeffs:
    """Coefficients of one quadratic mode: constant beta1, beta2 and the
    time-dependent linear terms beta3 (momentum) and beta4 (position)."""

    beta1: float
    beta2: float
    beta3: Signal
    beta4: Signal

    def __post_init__(self):
        if self.beta1 <= 0 or self.beta2 <= 0:
            raise ValueError("beta1 and beta2 must be positive")

    @property
    def mode_frequency(self) -> float:
        return math.sqrt(4.0 * self.beta1 * self.beta2)


class ClassicalTrajectory:
    """Dense samples of one particular solution (Q, Qdot, P, Pdot).

    The grid is uniform; interpolation to off-grid times uses the cubic
    Hermite form built from the stored values and derivatives, which keeps
    the interpolation error far below the integrator error.
    """

    def __init__(self, t, Q, Qdot, P, Pdot, axis: str = ""):
        self.t = np.asarray(t, dtype=float)
        self.Q = np.asarray(Q, dtype=float)
        self.Qdot = np.asarray(Qdot, dtype=float)
        self.P = np.asarray(P, dtype=float)
        self.Pdot = np.asarray(Pdot, dtype=float)
        self.axis = axis
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("trajectory time grid must be strictly increasing")
        self._h = float(self.t[1] - self.t[0]) if self.t.size > 1 else 0.0

    @property
    def window(self):
        return float(self.t[0]), float(self.t[-1])

    def _bracket(self, time: float) -> tuple[int, float]:
        t0, t1 = self.window
        if time < t0 - 1e-12 or time > t1 + 1e-12:
            raise ValueError(f"time {time} outside trajectory window [{t0}, {t1}]")
        k = int(min(max((time - t0) / self._h, 0.0), self.t.size - 2))
        s = (time - self.t[k]) / self._h
        return k, min(max(s, 0.0), 1.0)

    def interpolate(self, time: float):
        """Return (Q, Qdot, P, Pdot) at an arbitrary time in the window."""
        if self.t.size == 1:
            return self.Q[0], self.Qdot[0], self.P[0], self.Pdot[0]
        k, s = self._bracket(time)
        h = self._h
        h00 = (2 * s - 3) * s * s + 1.0
        h10 = ((s - 2) * s + 1.0) * s
        h01 = (3 - 2 * s) * s * s
        h11 = (s - 1.0) * s * s
        d00 = 6.0 * s * (s - 1.0) / h
        d10 = (3 * s - 4) * s + 1.0
        d01 = -d00 * h
        d11 = (3 * s - 2) * s

        def _mix(y, dy):
            val = h00 * y[k] + h10 * h * dy[k] + h01 * y[k + 1] + h11 * h * dy[k + 1]
            der = d00 * y[k] + d10 * dy[k] + (d01 / h) * y[k + 1] + d11 * dy[k + 1]
            return float(val), float(der)

        q, qd = _mix(self.Q, self.Qdot)
        p, pd = _mix(self.P, self.Pdot)
        return q, qd, p, pd

    def to_csv(self, path):
        header = "t,Q,Qdot,P,Pdot"
        data = np.column_stack([self.t, self.Q, self.Qdot, self.P, self.Pdot])
        with open(path, "w", newline="\n") as fh:
            fh.write(header + "\n")
            for row in data:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")


@dataclass(frozen=True)
class PhaseValue:
    """Accumulated phase at time t (dimensionless)."""

    Y: float
    t: float


def solve_particular(
    coeffs: QuadraticHamiltonianCoeffs,
    window: tuple[float, float],
    step: float,
    init=(0.0, 0.0),
    axis: str = "",
) -> ClassicalTrajectory:
    """Integrate one particular phase-space solution with fixed-step RK4.

    (Q, P) evolve under the coupled first-order equations of motion

        Qdot = 2 beta1 P + beta3(t),   Pdot = -2 beta2 Q - beta4(t),

    whose components individually satisfy the second-order forms quoted in
    the module docstring.  The pair must stay canonically locked: only the
    phase-space start ``init = (Q0, P0)`` is a free gauge choice, the
    initial slopes are implied.  Zero start is the default gauge.  The step
    is adjusted to divide the window exactly.
    """
    t0, t1 = float(window[0]), float(window[1])
    if step <= 0:
        raise ValueError("step must be positive")
    if not t1 > t0:
        raise ValueError("window must have positive length")
    if len(init) != 2:
        raise ValueError("init must be the phase-space start (Q0, P0)")
    n = max(1, int(round((t1 - t0) / step)))
    h = (t1 - t0) / n
    t = t0 + h * np.arange(n + 1)

    b1, b2 = coeffs.beta1, coeffs.beta2
    b3, b4 = coeffs.beta3, coeffs.beta4

    # drive terms evaluated in bulk at the RK4 stage times of every step
    t_mid = t[:-1] + 0.5 * h
    b3_s = (b3.value(t[:-1]), b3.value(t_mid), b3.value(t[1:]))
    b4_s = (b4.value(t[:-1]), b4.value(t_mid), b4.value(t[1:]))

    Q = np.empty(n + 1)
    P = np.empty(n + 1)
    Q[0], P[0] = float(init[0]), float(init[1])

    for i in range(n):
        q, p = Q[i], P[i]
        k1q = 2 * b1 * p + b3_s[0][i]
        k1p = -2 * b2 * q - b4_s[0][i]
        k2q = 2 * b1 * (p + 0.5 * h * k1p) + b3_s[1][i]
        k2p = -2 * b2 * (q + 0.5 * h * k1q) - b4_s[1][i]
        k3q = 2 * b1 * (p + 0.5 * h * k2p) + b3_s[1][i]
        k3p = -2 * b2 * (q + 0.5 * h * k2q) - b4_s[1][i]
        k4q = 2 * b1 * (p + h * k3p) + b3_s[2][i]
        k4p = -2 * b2 * (q + h * k3q) - b4_s[2][i]
        Q[i + 1] = q + h / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q)
        P[i + 1] = p + h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)

    Qdot = 2.0 * b1 * P + np.asarray(b3.value(t), float)
    Pdot = -2.0 * b2 * Q - np.asarray(b4.value(t), float)
    return ClassicalTrajectory(t, Q, Qdot, P, Pdot, axis=axis)


def rho_constant(coeffs: QuadraticHamiltonianCoeffs) -> float:
    """Constant width parameter rho = (beta1 / 4 beta2)^(1/4)."""
    return (coeffs.beta1 / (4.0 * coeffs.beta2)) ** 0.25


def _action_integrand(coeffs, traj, hbar):
    """Integrand of the action term on the trajectory grid."""
    b3 = coeffs.beta3.value(traj.t)
    return (
        traj.Qdot**2 / (4.0 * coeffs.beta1)
        - coeffs.beta2 * traj.Q**2
        - np.asarray(b3, float) ** 2 / (4.0 * coeffs.beta1)
    ) / hbar


def _action_integral(coeffs, traj, t: float, hbar: float) -> float:
    """Composite Simpson on the trajectory grid from its start up to t,
    with a high-order correction for the final partial segment."""
    t0 = traj.t[0]
    h = float(traj.t[1] - traj.t[0]) if traj.t.size > 1 else 0.0
    if t < t0 - 1e-12 or t > traj.window[1] + 1e-12:
        raise ValueError(f"time {t} outside trajectory window")
    if h == 0.0 or t <= t0:
        return 0.0

    k = int((t - t0) / h + 1e-9)
    k = min(k, traj.t.size - 1)
    if k % 2 == 1:  # Simpson needs an even interval count; drop one grid point
        k -= 1
    total = 0.0
    if k >= 2:
        f = _action_integrand(coeffs, traj, hbar)[: k + 1]
        total += h / 3.0 * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-2:2].sum())

    # remainder [t0 + k*h, t]: Simpson on two subintervals of the
    # Hermite-interpolated trajectory
    ta = t0 + k * h
    if t - ta > 1e-14:
        xs = (ta, 0.5 * (ta + t), t)
        vals = []
        for x in xs:
            q, qd, _, _ = traj.interpolate(x)
            b3 = float(coeffs.beta3.value(x))
            vals.append(
                (
                    qd**2 / (4.0 * coeffs.beta1)
                    - coeffs.beta2 * q**2
                    - b3**2 / (4.0 * coeffs.beta1)
                )
                / hbar
            )
        total += (t - ta) / 6.0 * (vals[0] + 4.0 * vals[1] + vals[2])
    return total


def phase_Y(
    quantum_numbers,
    axis_coeffs,
    trajectories,
    t: float,
    hbar: float,
) -> PhaseValue:
    """Accumulated phase of the product state at time t.

    One secular term -(n + 1/2) * omega_axis * t per axis, plus the action
    integral of each axis trajectory evaluated by composite Simpson on the
    trajectory grid.  Y(0) = 0 for any quantum numbers.
    """
    if not (len(quantum_numbers) == len(axis_coeffs) == len(trajectories)):
        raise ValueError("quantum numbers, coefficients and trajectories disagree")
    y = 0.0
    for n, coeffs, traj in zip(quantum_numbers, axis_coeffs, trajectories):
        if n < 0:
            raise ValueError("quantum numbers must be nonnegative")
        y -= (n + 0.5) * coeffs.mode_frequency * t
        y -= _action_integral(coeffs, traj, t, hbar)
    return PhaseValue(Y=y, t=t)


def ode_residual(traj: ClassicalTrajectory, coeffs: QuadraticHamiltonianCoeffs):
    """Max residual of the defining equations at interior grid points,
    with second derivatives taken by central differences.  Used by tests
    and the verification suite as an integrator sanity check."""
    h = traj.t[1] - traj.t[0]
    w_sq = 4.0 * coeffs.beta1 * coeffs.beta2
    t_in = traj.t[1:-1]

    qdd = (traj.Q[2:] - 2 * traj.Q[1:-1] + traj.Q[:-2]) / h**2
    fq = -2.0 * coeffs.beta1 * coeffs.beta4.value(t_in) + coeffs.beta3.derivative(t_in)
    res_q = np.abs(qdd + w_sq * traj.Q[1:-1] - fq).max() if t_in.size else 0.0

    pdd = (traj.P[2:] - 2 * traj.P[1:-1] + traj.P[:-2]) / h**2
    fp = -2.0 * coeffs.beta2 * coeffs.beta3.value(t_in) - coeffs.beta4.derivative(t_in)
    res_p = np.abs(pdd + w_sq * traj.P[1:-1] - fp).max() if t_in.size else 0.0
    return float(res_q), float(res_p)
