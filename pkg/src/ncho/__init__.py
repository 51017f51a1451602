"""Driven harmonic oscillator on 2D/3D noncommutative phase space.

Exact time-dependent states via the invariant method, Fisher information
and Shannon entropy with both closed-form and quadrature routes, and the
noncommutative Cramer-Rao and entropic uncertainty checks.
"""

from .model import (
    NCSpace,
    OscillatorConfig,
    DriveField,
    ConstantSignal,
    SinusoidSignal,
    RampSignal,
    TabulatedSignal,
    ZeroSignal,
    EffectiveParams,
    effective_params,
    drive_coefficients,
    rotating_frame_coeffs,
    RotatingFrameCoefficients,
    nc_variances,
)
from .dynamics import (
    QuadraticHamiltonianCoeffs,
    ClassicalTrajectory,
    solve_particular,
    rho_constant,
    phase_Y,
)
from .wavefunctions import (
    hermite,
    mode_eigenfunction,
    OscillatorSystem,
    QuantumState,
    SampledField,
    psi_lab,
    momentum_ground,
    evaluate_on_grid,
    momentum_numeric,
    position_numeric,
    momentum_on_grid,
    default_grids,
)
from .infotheory import (
    SampledDensity,
    InfoReport,
    fisher_commutative,
    fisher_nc,
    shannon,
    closed_forms,
    info_from_state,
    nc_uncertainty_bounds,
)
from .validation import (
    EffectiveHamiltonianSpec,
    schrodinger_residual,
    residual_convergence,
    invariant_expectation,
    oracle_report,
    run_verification_suite,
)

__version__ = "0.1.0"
