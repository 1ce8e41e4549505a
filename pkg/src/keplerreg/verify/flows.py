"""Flow-correspondence checks: regularized orbits against closed-form geodesics.

For a negative-energy orbit the regularized image must be the uniform
great-circle rotation by the mean anomaly; for positive energy, the uniform
hyperbolic geodesic at the hyperbolic mean anomaly; for zero energy, an
affine line with constant direction.  Each comparison integrates the orbit
with the reference integrator, pushes samples through the regime's forward
map and measures the worst pointwise deviation from the geodesic built out
of the initial frame.
"""

from __future__ import annotations

import math

import numpy as np

from .. import negative, positive
from ..errors import OffShell
from ..geometry import great_circle, hyperbolic_geodesic
from ..kepler import EnergyClass, PhaseState, classify, elements_from_state, energies
from ..zero import zero_energy_line
from .integrate import integrate_kepler

_WHICH_TO_CLASS = {
    "negative": EnergyClass.ELLIPTIC,
    "positive": EnergyClass.HYPERBOLIC,
    "zero": EnergyClass.PARABOLIC,
}


def flow_correspondence(initial: PhaseState, which: str, t_samples) -> float:
    """Worst deviation of the regularized flow from its closed-form geodesic.

    ``which`` selects the regime ("negative", "positive" or "zero") and must
    match the state's energy class.  Sample times are measured from the
    initial state; the orbit is integrated at tolerance 1e-12.
    """
    if which not in _WHICH_TO_CLASS:
        raise ValueError(f"unknown regime {which!r}")
    if classify(initial) is not _WHICH_TO_CLASS[which]:
        raise OffShell(f"initial state is not in the {which} regime")
    t_samples = np.asarray(t_samples, dtype=float)
    orbit = integrate_kepler(initial, float(t_samples.max()), tol=1e-12,
                             sample_times=t_samples)
    if which == "negative":
        return _negative_deviation(initial, orbit)
    if which == "positive":
        return _positive_deviation(initial, orbit)
    return _zero_deviation(orbit)


def _negative_deviation(initial: PhaseState, orbit) -> float:
    elements = elements_from_state(initial)
    h = energies(initial).h
    nu = math.sqrt(-2.0 * h)
    frame0 = negative.energy_frame(initial)
    # Anomaly of the initial state; the geodesic angle from the initial
    # frame is M(t) - psi0.
    psi0 = -elements.t_p * elements.mean_motion
    psi0 = _eccentric_from_mean(psi0, elements.e)
    worst = 0.0
    for t, state in zip(orbit.times, orbit.states):
        xy = negative.ligon_schaaf(state)
        mean = elements.mean_motion * (t - elements.t_p)
        gx, gy = great_circle(frame0.r, frame0.s, mean - psi0)
        worst = max(
            worst,
            float(np.max(np.abs(xy.x - gx))),
            float(np.max(np.abs(nu * xy.y - gy))),
        )
    return worst


def _eccentric_from_mean(mean: float, e: float) -> float:
    from ..anomalies import solve_elliptic

    return solve_elliptic(mean, e)


def _positive_deviation(initial: PhaseState, orbit) -> float:
    from ..anomalies import solve_hyperbolic

    elements = elements_from_state(initial)
    h = energies(initial).h
    root = math.sqrt(2.0 * h)
    frame0 = positive.energy_frame(initial)
    psi0 = solve_hyperbolic(-elements.t_p * elements.mean_motion, elements.e)
    worst = 0.0
    for t, state in zip(orbit.times, orbit.states):
        xy = positive.ligon_schaaf(state)
        mean = elements.mean_motion * (t - elements.t_p)
        gx, gy = hyperbolic_geodesic(frame0.r, frame0.s, mean + psi0)
        # Geodesic coordinates grow like cosh(M_h); only the deviation
        # relative to that scale is measurable in double precision.
        scale = max(1.0, float(np.max(np.abs(gx))), float(np.max(np.abs(gy))))
        worst = max(
            worst,
            float(np.max(np.abs(xy.x - gx))) / scale,
            float(np.max(np.abs(root * xy.y - gy))) / scale,
        )
    return worst


def _zero_deviation(orbit) -> float:
    fit = zero_energy_line(orbit.states)
    return max(fit.residual, fit.y_drift)
