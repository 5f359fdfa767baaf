"""Exact ground states of the inverse-power potential A/r^4 + B/r^3 + C/r^2 + D/r."""

__version__ = "0.1.0"

from .ansatz import (
    AnsatzParams,
    ClosedFormSolution,
    check_matching_system,
    constraint_C,
    ground_energy,
    log_ansatz_derivatives,
    normalization_constant,
    peak_radius,
    radial_wavefunction,
    select_B,
    solve,
    solve_ansatz,
    solve_B,
)
from .audit import AuditReport, audit, excited_b_conflict, legacy_energy_branches
from .errors import *  # noqa: F401,F403
from .potential import (
    Channel,
    Potential,
    RadialGrid,
    centrifugal_coefficient,
    effective_radial_term,
    evaluate_potential,
)
from .special import QuadratureResult, bessel_k, integrate_adaptive
from .verifier import VerificationReport, numerov_ground_energy, ode_residual, verify
