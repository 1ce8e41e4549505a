"""Regularization of negative-energy Kepler motion on the 3-sphere.

The Moser map identifies the H = -1/2 shell with the unit cotangent bundle
of S^3 minus the north pole.  Writing points of T*S^3 as (x, y) in R^4 x R^4
with |x| = 1 and <x, y> = 0, the forward map and its inverse are

    moser_forward(x, y) = ( -(1-x0) y_vec - y0 x_vec,  x_vec / (1-x0) ),
    moser_inverse(q, p) = ( ((|p|^2-1)/(|p|^2+1), 2p/(|p|^2+1)),
                            (-<q,p>, -(|p|^2+1) q/2 + <q,p> p) ).

For arbitrary H < 0 the energy-uniform frame map sends a state to the
orthonormal pair

    r = (|p|^2 |q| - 1,  sqrt(-2H) |q| p),
    s = (-sqrt(-2H) <q,p>,  -(q/|q| - <q,p> p)),

together with nu_inv = sqrt(-2H); along an orbit this frame rotates with
the eccentric anomaly.  Composing with the rotation by the angle carried in
the s0 slot (which equals the equation-of-center e sin(ecc anomaly), i.e.
eccentric minus mean anomaly) yields the energy-uniform regularizing map

    ligon_schaaf = frame_rotation o energy_frame,

under which the flow becomes the uniform great-circle rotation by the mean
anomaly:  x(t) = cos M r(0) + sin M s(0) and
sqrt(-2H) y(t) = -sin M r(0) + cos M s(0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstraintViolation,
    DegenerateImage,
    NoConvergence,
    NorthPole,
    NotNegativeEnergy,
    OffShell,
    OriginCollision,
)
from .geometry import CONSTRAINT_TOL, SphereCotangent
from .kepler import PhaseState, energies

#: States with |K+| above this are rejected by moser_inverse.
SHELL_TOL = 1e-10

#: Guard band around the stereographic pole x0 = 1.
POLE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MoserFrame:
    """Orthonormal frame (r, s) on S^3 plus the energy scale sqrt(-2H).

    The frame identities |r| = |s| = 1 and <r, s> = 0 hold on the whole
    negative-energy region, not only on the H = -1/2 shell.
    """

    r: np.ndarray
    s: np.ndarray
    nu_inv: float

    def __post_init__(self):
        object.__setattr__(self, "r", np.asarray(self.r, dtype=float))
        object.__setattr__(self, "s", np.asarray(self.s, dtype=float))
        if self.r.shape != (4,) or self.s.shape != (4,):
            raise ConstraintViolation("frame vectors must be 4-vectors")
        if not self.nu_inv > 0.0:
            raise ConstraintViolation("frame energy scale must be positive")
        if (
            abs(np.linalg.norm(self.r) - 1.0) > CONSTRAINT_TOL
            or abs(np.linalg.norm(self.s) - 1.0) > CONSTRAINT_TOL
            or abs(float(self.r @ self.s)) > CONSTRAINT_TOL
        ):
            raise ConstraintViolation("frame vectors must be orthonormal")


def moser_forward(xy: SphereCotangent) -> PhaseState:
    """Map a point of T*S^3 (minus the pole) back to phase space."""
    x, y = xy.x, xy.y
    if abs(1.0 - x[0]) <= POLE_TOL:
        raise NorthPole("moser_forward is singular at x0 = 1")
    one_minus = 1.0 - x[0]
    q = -one_minus * y[1:] - y[0] * x[1:]
    if not np.linalg.norm(q) > 0.0:
        raise OriginCollision("image has q = 0 (degenerate covector)")
    return PhaseState(q=q, p=x[1:] / one_minus)


def moser_inverse(state: PhaseState) -> SphereCotangent:
    """Inverse Moser map; requires K+ = 0, i.e. H = -1/2."""
    k_plus = energies(state).k_plus
    if abs(k_plus) > SHELL_TOL:
        raise OffShell(f"moser_inverse needs K+ = 0, got {k_plus!r}")
    p2 = float(state.p @ state.p)
    qp = float(state.q @ state.p)
    x = np.empty(4)
    x[0] = (p2 - 1.0) / (p2 + 1.0)
    x[1:] = 2.0 * state.p / (p2 + 1.0)
    y = np.empty(4)
    y[0] = -qp
    y[1:] = -0.5 * (p2 + 1.0) * state.q + qp * state.p
    return SphereCotangent(x=x, y=y)


def energy_frame(state: PhaseState) -> MoserFrame:
    """Energy-uniform frame map on the negative-energy region.

    At H = -1/2 the pair (r, s) coincides with moser_inverse and
    nu_inv = 1; the frame is invariant under the Kepler scaling.
    """
    h = energies(state).h
    if not h < 0.0:
        raise NotNegativeEnergy(f"energy frame needs H < 0, got {h!r}")
    nu = math.sqrt(-2.0 * h)
    r_len = state.r
    p2 = float(state.p @ state.p)
    qp = float(state.q @ state.p)
    r = np.empty(4)
    r[0] = p2 * r_len - 1.0
    r[1:] = nu * r_len * state.p
    s = np.empty(4)
    s[0] = -nu * qp
    s[1:] = -(state.q / r_len - qp * state.p)
    return MoserFrame(r=r, s=s, nu_inv=nu)


def frame_rotation(frame: MoserFrame) -> SphereCotangent:
    """Rotate the frame by the angle stored in its s0 slot and rescale.

    With theta = -s0 (the equation of center), the result is
    x = cos(theta) r - sin(theta) s and
    y = (sin(theta) r + cos(theta) s) / nu_inv, so |y| = 1/sqrt(-2H).
    """
    theta = -frame.s[0]
    c, sn = math.cos(theta), math.sin(theta)
    x = c * frame.r - sn * frame.s
    y = (sn * frame.r + c * frame.s) / frame.nu_inv
    return SphereCotangent(x=x, y=y)


def ligon_schaaf(state: PhaseState) -> SphereCotangent:
    """Energy-uniform regularizing map for H < 0 (frame map then rotation).

    The image satisfies |x| = 1, <x, y> = 0 and encodes the energy through
    H = -1/(2|y|^2).
    """
    return frame_rotation(energy_frame(state))


def ligon_schaaf_inverse(x, y) -> PhaseState:
    """Invert the negative-energy regularizing map.

    The energy is read from |y|, and the rotation angle theta solves the
    generalized Kepler equation theta = x0 sin(theta) - Y0 cos(theta) with
    Y = y/|y|; its derivative bound 1 - e > 0 makes the safeguarded Newton
    iteration globally convergent on the image (where |theta| = e |sin
    (ecc anomaly)| < 1).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    y_norm = float(np.linalg.norm(y))
    if abs(np.linalg.norm(x) - 1.0) > SHELL_TOL:
        raise ConstraintViolation("ligon_schaaf_inverse needs |x| = 1")
    if y_norm <= 0.0:
        raise ConstraintViolation("ligon_schaaf_inverse needs y != 0")
    if abs(float(x @ y)) > SHELL_TOL * max(1.0, y_norm):
        raise ConstraintViolation("ligon_schaaf_inverse needs <x, y> = 0")
    nu = 1.0 / y_norm
    h = -0.5 * nu * nu
    big_y = nu * y
    theta = _solve_rotation_angle(x[0], big_y[0])
    if abs(theta) >= math.pi:
        raise DegenerateImage("recovered rotation angle leaves the image domain")
    c, sn = math.cos(theta), math.sin(theta)
    r = c * x + sn * big_y
    s = -sn * x + c * big_y
    r_len = (1.0 - r[0]) / (nu * nu)
    if not r_len > 0.0:
        raise DegenerateImage("recovered |q| is not positive")
    qp = theta / nu
    p = r[1:] / (nu * r_len)
    q = r_len * (qp * p - s[1:])
    return PhaseState(q=q, p=p)


def _solve_rotation_angle(x0: float, y0: float) -> float:
    # f(theta) = theta - x0 sin(theta) + y0 cos(theta) is monotone on the
    # admissible set: x0^2 + y0^2 <= 1 there, so f' = 1 - (x0 cos + y0 sin)
    # >= 1 - e.  Newton from the first fixed-point iterate, with bisection
    # on [-pi, pi] as the safeguard.
    theta = -y0
    lo, hi = -math.pi, math.pi
    for _ in range(60):
        f = theta - x0 * math.sin(theta) + y0 * math.cos(theta)
        if abs(f) <= 1e-13:
            return theta
        if f > 0.0:
            hi = theta
        else:
            lo = theta
        fp = 1.0 - x0 * math.cos(theta) - y0 * math.sin(theta)
        if fp > 1e-14:
            theta -= f / fp
        if not lo < theta < hi:
            theta = 0.5 * (lo + hi)
    raise NoConvergence("rotation-angle recovery did not reach 1e-13")


def moser_integrals(xy: SphereCotangent):
    """Transformed first integrals on T*S^3.

    Returns (L', A', K+) with L'_i = eps_ijk x_j y_k, A'_i = x_i y0 - x0 y_i
    and K+ = 2|y| - 2.  Against (q, p) = moser_forward(x, y) these equal
    L(q,p), A(q,p) - (H + 1/2) q and K+(q,p).
    """
    x, y = xy.x, xy.y
    if abs(1.0 - x[0]) <= POLE_TOL:
        raise NorthPole("integrals are singular at x0 = 1")
    l_prime = np.cross(x[1:], y[1:])
    a_prime = x[1:] * y[0] - x[0] * y[1:]
    return l_prime, a_prime, 2.0 * float(np.linalg.norm(y)) - 2.0
