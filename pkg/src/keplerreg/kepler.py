"""Kepler problem core: Hamiltonians, first integrals, elements, scaling.

Units are chosen so the gravitational parameter is 1, giving

    H(q, p) = |p|^2 / 2 - 1/|q|  on  T*(R^3 \\ {0}).

Alongside H the package works with the normalized Hamiltonians obtained by
multiplying H - c by 2|q| for c in {-1/2, 0, +1/2}:

    K+ = 2|q|(H + 1/2) = |q|(|p|^2 + 1) - 2,
    K- = 2|q|(H - 1/2) = |q|(|p|^2 - 1) - 2,
    K0 = 2|q| H        = |q| |p|^2 - 2,

whose zero shells are the H = -1/2, +1/2 and 0 surfaces and whose flows
reproduce the Kepler flow there up to the time change d(tau) = dt / (2|q|).
The Poisson brackets {K, H} = <q,p>/|q|^2 * K hold identically on phase
space, not only on the shells, and are exposed for certification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    NonpositiveScale,
    OriginCollision,
    RectilinearOrbit,
)

#: States with |H| below this (scaled by max(1, |p|^2)) classify as parabolic.
PARABOLIC_TOL = 1e-10

_REGIMES = ("plus", "minus", "zero")


def _as_vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    return a


@dataclass(frozen=True, eq=False)
class PhaseState:
    """A point (q, p) of phase space with q != 0."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q", _as_vec3(self.q))
        object.__setattr__(self, "p", _as_vec3(self.p))
        if not np.linalg.norm(self.q) > 0.0:
            raise OriginCollision("phase state requires |q| > 0")

    @property
    def r(self) -> float:
        return float(np.linalg.norm(self.q))


class EnergyClass(Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


class Energies(NamedTuple):
    h: float
    k_plus: float
    k_minus: float
    k_zero: float


@dataclass(frozen=True, eq=False)
class FirstIntegrals:
    """Energy, angular momentum L = q x p and the Laplace-Runge-Lenz vector
    A = p x L - q/|q|.  The eccentricity is |A|, and the integrals satisfy
    <A, L> = 0 and |A|^2 = 1 + 2 H |L|^2."""

    h: float
    angular_momentum: np.ndarray
    lrl: np.ndarray

    @property
    def eccentricity(self) -> float:
        return float(np.linalg.norm(self.lrl))


@dataclass(frozen=True, eq=False)
class OrbitElements:
    """Conic elements of a non-rectilinear orbit.

    ``a`` stores the semi-major axis 1/(2|H|) and is None for parabolic
    orbits; ``latus`` is the semi-latus rectum |L|^2; ``t_p`` the periapsis
    passage time of a state taken at time 0; ``mean_motion`` is a^-3/2,
    |a|^-3/2 or 2*latus^-3/2 depending on the class.
    """

    energy_class: EnergyClass
    a: Optional[float]
    e: float
    latus: float
    t_p: float
    mean_motion: float


def energies(state: PhaseState) -> Energies:
    """Energy H plus the three normalized Hamiltonians K+, K-, K0."""
    r = state.r
    p2 = float(state.p @ state.p)
    h = 0.5 * p2 - 1.0 / r
    return Energies(
        h=h,
        k_plus=r * (p2 + 1.0) - 2.0,
        k_minus=r * (p2 - 1.0) - 2.0,
        k_zero=r * p2 - 2.0,
    )


def first_integrals(state: PhaseState) -> FirstIntegrals:
    """Compute H, L = q x p and A = p x L - q/|q|."""
    r = state.r
    l = np.cross(state.q, state.p)
    a = np.cross(state.p, l) - state.q / r
    return FirstIntegrals(h=energies(state).h, angular_momentum=l, lrl=a)


def classify(state: PhaseState) -> EnergyClass:
    """Energy class with a scale-aware parabolic cutoff.

    |H| < PARABOLIC_TOL * max(1, |p|^2) counts as parabolic so that exact
    zero-energy constructions always classify correctly.
    """
    h = energies(state).h
    p2 = float(state.p @ state.p)
    if abs(h) < PARABOLIC_TOL * max(1.0, p2):
        return EnergyClass.PARABOLIC
    return EnergyClass.ELLIPTIC if h < 0.0 else EnergyClass.HYPERBOLIC


def elements_from_state(state: PhaseState) -> OrbitElements:
    """Orbital elements of a state taken at time 0.

    The periapsis time solves the current anomaly from the radius and the
    sign of <q, p>, then applies the mean-anomaly normal form of the class;
    an exact apoapsis resolves to anomaly pi.  Radial orbits are rejected.
    """
    integrals = first_integrals(state)
    l_norm = float(np.linalg.norm(integrals.angular_momentum))
    if l_norm < 1e-12:
        raise RectilinearOrbit("conic elements need |L| > 0")
    klass = classify(state)
    e = integrals.eccentricity
    latus = l_norm * l_norm
    r = state.r
    qp = float(state.q @ state.p)
    h = integrals.h

    if klass is EnergyClass.ELLIPTIC:
        a = -1.0 / (2.0 * h)
        omega = a ** -1.5
        # (e sin psi, e cos psi) from <q,p> = sqrt(a) e sin psi, r = a(1 - e cos psi)
        psi = math.atan2(qp / math.sqrt(a), 1.0 - r / a)
        if psi == -math.pi:
            psi = math.pi
        mean = psi - e * math.sin(psi)
    elif klass is EnergyClass.HYPERBOLIC:
        a = 1.0 / (2.0 * h)
        omega = a ** -1.5
        arg = (1.0 + r / a) / e
        psi = math.copysign(math.acosh(max(1.0, arg)), qp)
        mean = e * math.sinh(psi) - psi
    else:
        a = None
        omega = 2.0 * latus ** -1.5
        psi = math.copysign(math.sqrt(max(0.0, 2.0 * r / latus - 1.0)), qp)
        mean = psi + psi ** 3 / 3.0

    return OrbitElements(
        energy_class=klass,
        a=a,
        e=e,
        latus=latus,
        t_p=-mean / omega,
        mean_motion=omega,
    )


def scale_state(rho: float, t: float, state: PhaseState):
    """Kepler scaling symmetry (t, q, p) -> (rho^3 t, rho^2 q, p / rho).

    The Hamiltonian transforms as H -> H / rho^2, so the full family of
    orbits is generated by the three shells H = -1/2, 0, +1/2.
    """
    if not rho > 0.0:
        raise NonpositiveScale(f"scale factor must be positive, got {rho!r}")
    return rho ** 3 * t, PhaseState(q=rho ** 2 * state.q, p=state.p / rho)


def vector_field_h(state: PhaseState):
    """Hamiltonian vector field of H: (p, -q/|q|^3)."""
    r = state.r
    return state.p.copy(), -state.q / r ** 3


def vector_field_k(state: PhaseState, which: str):
    """Hamiltonian vector field of K+, K- or K0.

    All three share dq = 2|q| p; dp is -(|p|^2 + c) q / |q| with c = +1, -1
    or 0.  On the corresponding zero shell this equals 2|q| times the field
    of H.
    """
    c = _regime_constant(which)
    r = state.r
    p2 = float(state.p @ state.p)
    return 2.0 * r * state.p, -(p2 + c) / r * state.q


def poisson_bracket_k_h(state: PhaseState, which: str):
    """Poisson bracket {K, H} from closed-form gradients, and its predicted
    value <q,p>/|q|^2 * K.  The two agree at every state, on or off shell."""
    c = _regime_constant(which)
    r = state.r
    p2 = float(state.p @ state.p)
    qp = float(state.q @ state.p)
    # dK/dq = (|p|^2 + c) q/|q|, dK/dp = 2|q| p; dH/dq = q/|q|^3, dH/dp = p.
    bracket = (p2 + c) * qp / r - 2.0 * r * qp / r ** 3
    k = r * (p2 + c) - 2.0
    predicted = qp / r ** 2 * k
    return bracket, predicted


def _regime_constant(which: str) -> float:
    if which == "plus":
        return 1.0
    if which == "minus":
        return -1.0
    if which == "zero":
        return 0.0
    raise ValueError(f"regime must be one of {_REGIMES}, got {which!r}")
