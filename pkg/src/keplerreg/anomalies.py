"""Anomalies and Kepler-equation solvers for all three energy regimes.

Orbits are planar with the focus at the origin, periapsis on the positive
x-axis and prograde motion.  The focal equation is r = latus/(1 + e cos nu)
with true anomaly nu, and the auxiliary anomalies parametrize the conic as

    elliptic    x = a (cos psi - e),          y = a sqrt(1-e^2) sin psi
    hyperbolic  x = |a| (e - cosh psi),       y = |a| sqrt(e^2-1) sinh psi
    parabolic   x = (latus/2)(1 - psi^2),     y = latus * psi

(the hyperbolic branch is written focus-centered so |position| = r holds
directly).  Mean anomalies obey the normal forms

    M  = psi - e sin psi,   M_h = e sinh psi - psi,   M_p = psi + psi^3 / 3,

with mean motions a^-3/2, |a|^-3/2 and 2*latus^-3/2.  Each normal form is
strictly increasing in psi, so the solvers below have unique solutions.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import EccentricityOutOfRange, HyperbolicDomain
from .kepler import EnergyClass, OrbitElements

_TWO_PI = 2.0 * math.pi


class SolverResult(NamedTuple):
    psi: float
    residual: float
    iterations: int


def solve_elliptic(mean: float, e: float) -> float:
    """Solve psi - e sin psi = mean for 0 <= e < 1.

    The solution is returned on the same 2*pi branch as the mean anomaly,
    which makes the solver exactly 2*pi-equivariant.
    """
    return solve_elliptic_detailed(mean, e).psi


def solve_elliptic_detailed(mean: float, e: float) -> SolverResult:
    if not 0.0 <= e < 1.0:
        raise EccentricityOutOfRange(f"elliptic solver needs 0 <= e < 1, got {e!r}")
    # Reduce to (-pi, pi] so the Newton start is well placed, then restore
    # the branch; sin is periodic so the residual is unchanged.
    turns = math.floor((mean + math.pi) / _TWO_PI)
    m = mean - _TWO_PI * turns
    if e <= 0.8 or m == 0.0:
        psi = m
    else:
        psi = math.copysign(math.pi, m)
    iterations = 0
    for _ in range(50):
        iterations += 1
        f = psi - e * math.sin(psi) - m
        if abs(f) <= 1e-15 * max(1.0, abs(m)):
            break
        psi -= f / (1.0 - e * math.cos(psi))
    else:
        # Newton stalled (possible only for e close to 1); bisection on the
        # bracket [m - e, m + e] always converges for this monotone form.
        lo, hi = m - e, m + e
        for _ in range(200):
            iterations += 1
            psi = 0.5 * (lo + hi)
            if psi - e * math.sin(psi) - m > 0.0:
                hi = psi
            else:
                lo = psi
    psi += _TWO_PI * turns
    residual = psi - e * math.sin(psi) - mean
    return SolverResult(psi, residual, iterations)


def solve_hyperbolic(mean: float, e: float) -> float:
    """Solve e sinh psi - psi = mean for e > 1."""
    return solve_hyperbolic_detailed(mean, e).psi


def solve_hyperbolic_detailed(mean: float, e: float) -> SolverResult:
    if not e > 1.0:
        raise EccentricityOutOfRange(f"hyperbolic solver needs e > 1, got {e!r}")
    psi = math.asinh(mean / e)
    iterations = 0
    for _ in range(60):
        iterations += 1
        f = e * math.sinh(psi) - psi - mean
        if abs(f) <= 1e-15 * max(1.0, abs(mean)):
            break
        step = f / (e * math.cosh(psi) - 1.0)
        # Damp the rare overshoot far from the root; the function is convex
        # in |psi| so halving is safe.
        if abs(step) > 1.0 + abs(psi):
            step = math.copysign(1.0 + abs(psi), step)
        psi -= step
    residual = e * math.sinh(psi) - psi - mean
    return SolverResult(psi, residual, iterations)


def solve_parabolic(mean: float) -> float:
    """Real root of psi + psi^3/3 = mean (closed form plus one polish)."""
    return solve_parabolic_detailed(mean).psi


def solve_parabolic_detailed(mean: float) -> SolverResult:
    # Cardano for psi^3 + 3 psi - 3 mean = 0: with w the positive real cube
    # root of 3 mean/2 + sqrt((3 mean/2)^2 + 1), the root is w - 1/w.
    b = 1.5 * mean
    w = float(np.cbrt(b + math.hypot(b, 1.0)))
    psi = w - 1.0 / w
    # One Newton step takes the closed form to machine accuracy.
    psi -= (psi + psi ** 3 / 3.0 - mean) / (1.0 + psi * psi)
    residual = psi + psi ** 3 / 3.0 - mean
    return SolverResult(psi, residual, 1)


def mean_from_anomaly(psi: float, e: float, energy_class: EnergyClass) -> float:
    """Evaluate the class's mean-anomaly normal form at psi."""
    if energy_class is EnergyClass.ELLIPTIC:
        if not 0.0 <= e < 1.0:
            raise EccentricityOutOfRange(f"elliptic form needs 0 <= e < 1, got {e!r}")
        return psi - e * math.sin(psi)
    if energy_class is EnergyClass.HYPERBOLIC:
        if not e > 1.0:
            raise EccentricityOutOfRange(f"hyperbolic form needs e > 1, got {e!r}")
        return e * math.sinh(psi) - psi
    return psi + psi ** 3 / 3.0


def true_from_anomaly(psi: float, e: float, energy_class: EnergyClass) -> float:
    """True anomaly from the auxiliary anomaly via half-angle formulas.

    Elliptic: tan(nu/2) = sqrt((1+e)/(1-e)) tan(psi/2).  Hyperbolic uses the
    real form tan(nu/2) = sqrt((e+1)/(e-1)) tanh(psi/2); parabolic is
    tan(nu/2) = psi.
    """
    if energy_class is EnergyClass.ELLIPTIC:
        if not 0.0 <= e < 1.0:
            raise EccentricityOutOfRange(f"elliptic form needs 0 <= e < 1, got {e!r}")
        half = 0.5 * psi
        return 2.0 * math.atan2(
            math.sqrt(1.0 + e) * math.sin(half), math.sqrt(1.0 - e) * math.cos(half)
        )
    if energy_class is EnergyClass.HYPERBOLIC:
        if not e > 1.0:
            raise EccentricityOutOfRange(f"hyperbolic form needs e > 1, got {e!r}")
        return 2.0 * math.atan(math.sqrt((e + 1.0) / (e - 1.0)) * math.tanh(0.5 * psi))
    return 2.0 * math.atan(psi)


def radius_from_anomaly(psi: float, elements: OrbitElements) -> float:
    """Radius at the given anomaly, dispatched on the energy class."""
    klass = elements.energy_class
    if klass is EnergyClass.ELLIPTIC:
        return elements.a * (1.0 - elements.e * math.cos(psi))
    if klass is EnergyClass.HYPERBOLIC:
        value = elements.e * math.cosh(psi) - 1.0
        if value <= 0.0:
            raise HyperbolicDomain("e cosh(psi) - 1 must be positive for e > 1")
        return elements.a * value
    return 0.5 * elements.latus * (1.0 + psi * psi)


def position_from_anomaly(psi: float, elements: OrbitElements):
    """In-plane position (x, y) at the given anomaly, focus at the origin."""
    e = elements.e
    klass = elements.energy_class
    if klass is EnergyClass.ELLIPTIC:
        a = elements.a
        return a * (math.cos(psi) - e), a * math.sqrt(1.0 - e * e) * math.sin(psi)
    if klass is EnergyClass.HYPERBOLIC:
        a = elements.a
        return a * (e - math.cosh(psi)), a * math.sqrt(e * e - 1.0) * math.sinh(psi)
    latus = elements.latus
    return 0.5 * latus * (1.0 - psi * psi), latus * psi


def velocity_from_anomaly(psi: float, elements: OrbitElements):
    """In-plane velocity (vx, vy) at the given anomaly.

    Differentiates the parametrizations with d(psi)/dt from the normal
    forms: mean_motion / (1 - e cos psi), / (e cosh psi - 1), / (1 + psi^2).
    """
    e = elements.e
    omega = elements.mean_motion
    klass = elements.energy_class
    if klass is EnergyClass.ELLIPTIC:
        a = elements.a
        psi_dot = omega / (1.0 - e * math.cos(psi))
        return (
            -a * math.sin(psi) * psi_dot,
            a * math.sqrt(1.0 - e * e) * math.cos(psi) * psi_dot,
        )
    if klass is EnergyClass.HYPERBOLIC:
        a = elements.a
        psi_dot = omega / (e * math.cosh(psi) - 1.0)
        return (
            -a * math.sinh(psi) * psi_dot,
            a * math.sqrt(e * e - 1.0) * math.cosh(psi) * psi_dot,
        )
    latus = elements.latus
    psi_dot = omega / (1.0 + psi * psi)
    return -latus * psi * psi_dot, latus * psi_dot


def solve_for_class(energy_class: EnergyClass, mean: float, e: float) -> SolverResult:
    """Class-dispatched solver with residual and iteration diagnostics."""
    if energy_class is EnergyClass.ELLIPTIC:
        return solve_elliptic_detailed(mean, e)
    if energy_class is EnergyClass.HYPERBOLIC:
        return solve_hyperbolic_detailed(mean, e)
    return solve_parabolic_detailed(mean)
