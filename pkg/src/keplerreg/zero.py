"""Zero-energy (parabolic) regularization through quaternion inversion.

With q, p and the regularized pair (x, y) all treated as pure quaternions,
the chart and its inverse are

    line_forward(x, y)  = ( x y x / 2,  2 x^{-1} ),
    line_inverse(q, p)  = ( 2 p^{-1},  p q p / 2 ),

mutually inverse wherever p != 0 (not only on the shell).  On the K0 = 0
shell the inverse simplifies to (-|q| p, q/|q| - <q,p> p), the transformed
integrals are A = y, L = x ^ y (cross product) and K0 = 2|y| - 2, and each
zero-energy orbit becomes an affine line: y(t) is constant and
x(t) = x(0) + theta(t) y(0) with theta increasing monotonically.

The measured line rate is d(theta)/dt = 1/|q(t)| (equivalently the fitted
parameter equals sqrt(latus) times the parabolic anomaly); see the module
tests, which pin the rate against a quadrature oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .anomalies import solve_parabolic
from .errors import (
    DegenerateLine,
    NotParabolic,
    OffShell,
    OriginCollision,
    ZeroMomentum,
    ZeroQuaternion,
)
from .geometry import Quaternion
from .kepler import EnergyClass, OrbitElements, PhaseState, energies

#: States with |K0| above this are rejected by the shell-only operations.
SHELL_TOL = 1e-8


def _as_vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    return a


@dataclass(frozen=True, eq=False)
class LinePoint:
    """Regularized pair (x, y); y is constant along zero-energy orbits."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", _as_vec3(self.x))
        object.__setattr__(self, "y", _as_vec3(self.y))


class LineFit(NamedTuple):
    y0: np.ndarray
    x0: np.ndarray
    thetas: np.ndarray
    residual: float
    y_drift: float


def line_forward(pt: LinePoint) -> PhaseState:
    """Map (x, y) to phase space via q = x y x / 2, p = 2 x^{-1}."""
    x = Quaternion.from_vector(pt.x)
    if x.norm_sq() == 0.0:
        raise ZeroQuaternion("line_forward needs x != 0")
    y = Quaternion.from_vector(pt.y)
    q = (x * y * x) * 0.5
    p = 2.0 * x.inverse()
    q_vec = q.pure_vector(tol=1e-12)
    if not np.linalg.norm(q_vec) > 0.0:
        raise OriginCollision("image has q = 0 (y vanishes)")
    return PhaseState(q=q_vec, p=p.pure_vector(tol=1e-12))


def line_inverse(state: PhaseState) -> LinePoint:
    """Map phase space to (2 p^{-1}, p q p / 2); needs p != 0.

    Off the K0 = 0 shell this is still the inverse of line_forward; the
    simplified form (-|q| p, q/|q| - <q,p> p) only agrees on the shell.
    """
    if not np.linalg.norm(state.p) > 1e-12:
        raise ZeroMomentum("line_inverse needs p != 0")
    p = Quaternion.from_vector(state.p)
    q = Quaternion.from_vector(state.q)
    x = 2.0 * p.inverse()
    y = (p * q * p) * 0.5
    return LinePoint(x=x.pure_vector(tol=1e-12), y=y.pure_vector(tol=1e-12))


def zero_energy_line(states: Sequence[PhaseState]) -> LineFit:
    """Fit the affine line traced by a zero-energy orbit.

    Every state must satisfy K0 = 0 within 1e-8.  Returns the constant
    direction y(0), the base point x(0), the fitted parameters theta_i
    (least squares along y(0)), the largest off-line residual and the
    largest drift of y.
    """
    if len(states) == 0:
        raise ValueError("zero_energy_line needs at least one state")
    points = []
    for state in states:
        k0 = energies(state).k_zero
        if abs(k0) > SHELL_TOL:
            raise OffShell(f"state has K0 = {k0!r}, not on the zero shell")
        points.append(line_inverse(state))
    y0 = points[0].y
    y0_sq = float(y0 @ y0)
    if math.sqrt(y0_sq) < 1e-12:
        raise DegenerateLine("line direction |y(0)| vanishes")
    x0 = points[0].x
    thetas = np.empty(len(points))
    residual = 0.0
    y_drift = 0.0
    for i, pt in enumerate(points):
        thetas[i] = float((pt.x - x0) @ y0) / y0_sq
        residual = max(residual, float(np.linalg.norm(pt.x - x0 - thetas[i] * y0)))
        y_drift = max(y_drift, float(np.linalg.norm(pt.y - y0)))
    return LineFit(y0=y0, x0=x0, thetas=thetas, residual=residual, y_drift=y_drift)


def line_parameter(elements: OrbitElements, t: float) -> float:
    """Line parameter psi_p / (mean_motion * latus) at time t.

    psi_p solves the parabolic normal form at mean anomaly
    mean_motion * (t - t_p); the parameter vanishes at periapsis.  Note the
    geodesic parameter fitted by zero_energy_line runs at twice this value
    (the factor is pinned by the module tests).
    """
    if elements.energy_class is not EnergyClass.PARABOLIC:
        raise NotParabolic("line parameter is defined for parabolic elements")
    psi = solve_parabolic(elements.mean_motion * (t - elements.t_p))
    return psi / (elements.mean_motion * elements.latus)


def degeneration_limit(state: PhaseState):
    """Limit of the positive-energy regularizing map on the zero shell.

    For a state with K0 = 0 returns (x0, xbar, y0, ybar) with x0 = y0 = 0,
    xbar = -(|q| p + <q,p> (q/|q| - <q,p> p)) and ybar = q/|q| - <q,p> p.
    The nonzero entries are the first-order coefficients of the map in
    sqrt(2H) as H -> 0+; they are constant along the orbit.
    """
    k0 = energies(state).k_zero
    if abs(k0) > SHELL_TOL:
        raise OffShell(f"degeneration limit needs K0 = 0, got {k0!r}")
    r = state.r
    qp = float(state.q @ state.p)
    ybar = state.q / r - qp * state.p
    xbar = -(r * state.p + qp * ybar)
    return 0.0, xbar, 0.0, ybar


def degeneration_distance(state_on_shell: PhaseState, h: float) -> float:
    """Normalized deviation of the H = h image from the degeneration limit.

    The comparison state keeps q and stretches p to reach energy h exactly.
    With nu = sqrt(2h) and (x, y) its regularized image, the deviation is

        max(|x0 - 1|, |xbar/nu - xbar_lim|_inf, |y0|, |nu*ybar + ybar_lim|_inf),

    which decays at first order in h.
    """
    from .positive import ligon_schaaf  # local import to keep modules acyclic

    if not h > 0.0:
        raise NotPositiveEnergy(f"comparison energy must be positive, got {h!r}")
    _, xbar_lim, _, ybar_lim = degeneration_limit(state_on_shell)
    stretched = PhaseState(
        q=state_on_shell.q,
        p=state_on_shell.p * math.sqrt(1.0 + h * state_on_shell.r),
    )
    xy = ligon_schaaf(stretched)
    nu = math.sqrt(2.0 * h)
    return max(
        abs(xy.x[0] - 1.0),
        float(np.max(np.abs(xy.x[1:] / nu - xbar_lim))),
        abs(xy.y[0]),
        float(np.max(np.abs(nu * xy.y[1:] + ybar_lim))),
    )
