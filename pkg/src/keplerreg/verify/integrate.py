"""Reference integration of the Kepler flow.

An embedded Dormand-Prince 5(4) pair with PI step-size control and the
standard quartic dense-output interpolant.  The controller bounds the local
error per unit time (error-per-unit-step control), so the global error of
an accepted trajectory scales linearly with the tolerance; that scaling is
itself one of the harness checks.

The integrator is internal machinery: it exists to certify the closed-form
maps, not as a product feature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..anomalies import position_from_anomaly, solve_for_class, velocity_from_anomaly
from ..errors import CollisionApproach, RectilinearOrbit, StepFailure
from ..kepler import OrbitElements, PhaseState, first_integrals

# Dormand-Prince coefficients (5th-order propagation, 4th-order error weights).
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)
# Quartic interpolant weights: y(t0 + s h) = y0 + h K^T P [s, s^2, s^3, s^4].
_P = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

#: Trajectories with |q| below this abort with CollisionApproach.
COLLISION_RADIUS = 1e-6


def _rhs(y: np.ndarray) -> np.ndarray:
    q = y[:3]
    r = math.sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2])
    if r < COLLISION_RADIUS:
        raise CollisionApproach(f"|q| = {r!r} fell below {COLLISION_RADIUS}")
    out = np.empty(6)
    out[:3] = y[3:]
    out[3:] = -q / r ** 3
    return out


@dataclass(eq=False)
class IntegratedOrbit:
    """Sampled solution of the Kepler equations with dense output.

    ``times`` are strictly increasing; ``states`` are the phase states at
    those times.  ``state_at`` evaluates the quartic interpolant anywhere in
    the integrated span.
    """

    times: np.ndarray
    states: list
    tolerance: float
    steps: int
    rejections: int
    _segments: list = field(default_factory=list, repr=False)
    _starts: np.ndarray = field(default=None, repr=False)

    def state_at(self, t: float) -> PhaseState:
        y = self._y_at(t)
        return PhaseState(q=y[:3], p=y[3:])

    def _y_at(self, t: float) -> np.ndarray:
        t0_last, h_last, _, _ = self._segments[-1]
        t_end = t0_last + h_last
        slack = 1e-9 * max(1.0, abs(t_end))
        if not self._starts[0] - slack <= t <= t_end + slack:
            raise ValueError(f"time {t!r} outside integrated span")
        idx = int(np.searchsorted(self._starts, t, side="right") - 1)
        idx = min(max(idx, 0), len(self._segments) - 1)
        t0, h, y0, q_interp = self._segments[idx]
        s = (t - t0) / h
        powers = np.array([s, s * s, s ** 3, s ** 4])
        return y0 + h * (q_interp @ powers)


def integrate_kepler(
    initial: PhaseState,
    t_final: float,
    tol: float = 1e-12,
    sample_times: Optional[Sequence[float]] = None,
) -> IntegratedOrbit:
    """Integrate the Kepler flow from the initial state over [0, t_final].

    The local error per unit time is bounded by ``tol``.  If sample_times is
    given the returned orbit is sampled there (dense output); otherwise at
    the accepted step points.
    """
    if not t_final > 0.0:
        raise ValueError("t_final must be positive")
    y = np.concatenate([initial.q, initial.p])
    t = 0.0
    k = np.empty((7, 6))
    k[0] = _rhs(y)
    h = _initial_step(y, k[0], tol)
    segments = []
    steps = 0
    rejections = 0
    err_prev = 1.0
    while t < t_final:
        h = min(h, t_final - t)
        if h < 1e-14 * max(1.0, t_final):
            raise StepFailure(f"step size underflow at t = {t!r}")
        for i in range(1, 7):
            k[i] = _rhs(y + h * (_A[i] @ k[:i]))
        y_new = y + h * (_B @ k)
        err_vec = h * (_E @ k)
        scale = tol * h * np.maximum(1.0, np.maximum(np.abs(y), np.abs(y_new)))
        err = math.sqrt(float(np.mean((err_vec / scale) ** 2)))
        if err <= 1.0:
            segments.append((t, h, y.copy(), k.T @ _P))
            t += h
            y = y_new
            k[0] = k[6]  # first-same-as-last
            factor = 0.9 * (err + 1e-300) ** -0.2 * err_prev ** 0.04
            err_prev = err + 1e-300
            h *= min(5.0, max(0.2, factor))
        else:
            rejections += 1
            h *= min(1.0, max(0.2, 0.9 * err ** -0.2))
        steps += 1
    orbit = IntegratedOrbit(
        times=np.empty(0),
        states=[],
        tolerance=tol,
        steps=len(segments),
        rejections=rejections,
        _segments=segments,
        _starts=np.array([seg[0] for seg in segments]),
    )
    if sample_times is None:
        times = np.array([seg[0] for seg in segments] + [t_final])
    else:
        times = np.asarray(sample_times, dtype=float)
        if times.size and (times.min() < -1e-12 or times.max() > t_final + 1e-12):
            raise ValueError("sample times must lie in [0, t_final]")
    orbit.times = times
    orbit.states = [orbit.state_at(ti) for ti in times]
    return orbit


def _initial_step(y0: np.ndarray, f0: np.ndarray, tol: float) -> float:
    # Hairer's starting-step heuristic with the error-per-unit-step target.
    scale = np.maximum(1.0, np.abs(y0))
    d0 = math.sqrt(float(np.mean((y0 / scale) ** 2)))
    d1 = math.sqrt(float(np.mean((f0 / scale) ** 2)))
    h0 = 0.01 * d0 / d1 if d0 > 1e-5 and d1 > 1e-5 else 1e-6
    y1 = y0 + h0 * f0
    f1 = _rhs(y1)
    d2 = math.sqrt(float(np.mean(((f1 - f0) / scale) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (tol / max(d1, d2)) ** 0.25
    return min(100.0 * h0, h1)


def orbit_plane_basis(state: PhaseState):
    """Orthonormal in-plane basis (periapsis direction, prograde normal).

    For circular orbits the periapsis direction is undefined and the current
    radial direction is used instead, matching the anomaly convention of
    elements_from_state.
    """
    integrals = first_integrals(state)
    l = integrals.angular_momentum
    l_norm = float(np.linalg.norm(l))
    if l_norm < 1e-12:
        raise RectilinearOrbit("plane basis needs |L| > 0")
    l_hat = l / l_norm
    if integrals.eccentricity > 1e-12:
        e1 = integrals.lrl / integrals.eccentricity
    else:
        e1 = state.q / state.r
    e1 = e1 - (e1 @ l_hat) * l_hat
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(l_hat, e1)


def anomaly_propagate(elements: OrbitElements, basis, t: float) -> PhaseState:
    """Closed-form propagation to time t from elements and a plane basis.

    Solves the class's normal form at mean anomaly mean_motion*(t - t_p) and
    assembles position and velocity from the conic parametrization.  Used as
    the cross-check against the reference integrator.
    """
    e1, e2 = basis
    mean = elements.mean_motion * (t - elements.t_p)
    psi = solve_for_class(elements.energy_class, mean, elements.e).psi
    x, y = position_from_anomaly(psi, elements)
    vx, vy = velocity_from_anomaly(psi, elements)
    return PhaseState(q=x * e1 + y * e2, p=vx * e1 + vy * e2)
