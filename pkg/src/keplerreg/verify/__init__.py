"""Numerical certification harness.

Reference ODE integration of the Kepler flow, finite-difference Jacobians
and symplectic-form residuals, flow-correspondence measurements and the
named suite runner.
"""

from .flows import flow_correspondence
from .integrate import IntegratedOrbit, anomaly_propagate, integrate_kepler, orbit_plane_basis
from .jacobian import fd_jacobian, state_to_vec, step_halving_ratio, symplectic_residual, vec_to_state
from .suites import CheckResult, VerificationReport, run_suite, suite_names

__all__ = [
    "CheckResult",
    "IntegratedOrbit",
    "VerificationReport",
    "anomaly_propagate",
    "fd_jacobian",
    "flow_correspondence",
    "integrate_kepler",
    "orbit_plane_basis",
    "run_suite",
    "state_to_vec",
    "step_halving_ratio",
    "suite_names",
    "symplectic_residual",
    "vec_to_state",
]
