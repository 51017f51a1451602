"""Run every oracle end to end and print the check table.

Covers closed-form vs quadrature agreement, wavefunction normalization,
Parseval, the numeric-vs-closed-form momentum transform, the Schrödinger
residual of the analytic state, invariant eigenvalues, the uncertainty
floors, Cramer-Rao margins and the monotonicity scans.  Equivalent to
`ncho verify --theta 1 --eta 0.5 --drive sin:1:2 --drive const:0.5`.
"""

from ncho import NCSpace, OscillatorConfig, run_verification_suite
from ncho.model import ConstantSignal, DriveField, SinusoidSignal

drive = DriveField((SinusoidSignal(1.0, 2.0), ConstantSignal(0.5)))
cfg = OscillatorConfig(mass=1.0, omega0=1.0, charge=1.0, drive=drive)
space = NCSpace(theta=1.0, eta=0.5)

table = run_verification_suite(cfg, space)
print(table.summary())

raise SystemExit(0 if table.all_passed else 1)
