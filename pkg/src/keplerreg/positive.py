"""Regularization of positive-energy Kepler motion on the hyperboloid.

The Belbruno map plays the role of the Moser map for H = +1/2, with the
3-sphere replaced by the upper sheet H3+ of the unit hyperboloid in
Minkowski space R^{1,3}.  The forward map here is

    belbruno_forward(x, y) = ( (1-x0) y_vec + y0 x_vec,  x_vec / (1-x0) ),

with x0 > 1; relative to the spherical expression the covector enters with
the opposite sign, which is forced by requiring it to invert

    belbruno_inverse(q, p) = ( ((|p|^2+1)/(|p|^2-1), 2p/(1-|p|^2)),
                               (-<q,p>, (1-|p|^2) q/2 + <q,p> p) )

on the K- = 0 shell (with the spherical sign the composition returns
(-q, p), the fiber antipode).

The energy-uniform frame for H > 0 is

    r = (|p|^2 |q| - 1,  -sqrt(2H) |q| p),
    s = (-sqrt(2H) <q,p>,  -(q/|q| - <q,p> p)),

satisfying <r,r>_L = 1, <s,s>_L = -1, <r,s>_L = 0 and r0 > 1 on the whole
region.  Along an orbit the frame boosts with (minus) the hyperbolic
anomaly; composing with the hyperbolic rotation by the s0 slot (which
equals -(M_h + psi_h)) gives the regularizing map under which the flow is
the uniform geodesic

    x(t) = cosh M_h r(0) + sinh M_h s(0),
    sqrt(2H) y(t) = sinh M_h r(0) + cosh M_h s(0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstraintViolation,
    NoConvergence,
    NotPositiveEnergy,
    OffShell,
    OriginCollision,
    RangeExceeded,
    SheetViolation,
)
from .geometry import (
    CONSTRAINT_TOL,
    HYPERBOLIC_ARG_MAX,
    HyperboloidCotangent,
    mink_inner,
    mink_norm_sq,
)
from .kepler import PhaseState, energies

SHELL_TOL = 1e-10
POLE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BelbrunoFrame:
    """Minkowski-orthonormal frame (r, s) plus the scale nu = 1/sqrt(2H)."""

    r: np.ndarray
    s: np.ndarray
    nu: float

    def __post_init__(self):
        object.__setattr__(self, "r", np.asarray(self.r, dtype=float))
        object.__setattr__(self, "s", np.asarray(self.s, dtype=float))
        if self.r.shape != (4,) or self.s.shape != (4,):
            raise ConstraintViolation("frame vectors must be 4-vectors")
        if not self.nu > 0.0:
            raise ConstraintViolation("frame scale must be positive")
        if (
            abs(mink_norm_sq(self.r) - 1.0) > CONSTRAINT_TOL
            or abs(mink_norm_sq(self.s) + 1.0) > CONSTRAINT_TOL
            or abs(mink_inner(self.r, self.s)) > CONSTRAINT_TOL
        ):
            raise ConstraintViolation("frame must satisfy <r,r>=1, <s,s>=-1, <r,s>=0")
        if self.r[0] <= 0.0:
            raise ConstraintViolation("frame base point must be on the upper sheet")


def belbruno_forward(xy: HyperboloidCotangent) -> PhaseState:
    """Map a point of T*H3+ (off the sheet pole x0 = 1) to phase space.

    The covector sign is chosen so that belbruno_inverse is the actual
    inverse and the transformed Laplace-Runge-Lenz identity
    A - (H - 1/2) q = (x_vec y0 - x0 y_vec) holds; the angular momentum
    then transforms with the opposite orientation, L = y_vec x x_vec.
    """
    x, y = xy.x, xy.y
    if x[0] - 1.0 <= POLE_TOL:
        raise SheetViolation("belbruno_forward needs x0 > 1")
    one_minus = 1.0 - x[0]
    q = one_minus * y[1:] + y[0] * x[1:]
    if not np.linalg.norm(q) > 0.0:
        raise OriginCollision("image has q = 0 (degenerate covector)")
    return PhaseState(q=q, p=x[1:] / one_minus)


def belbruno_inverse(state: PhaseState) -> HyperboloidCotangent:
    """Inverse Belbruno map; requires K- = 0, i.e. H = +1/2."""
    k_minus = energies(state).k_minus
    if abs(k_minus) > SHELL_TOL:
        raise OffShell(f"belbruno_inverse needs K- = 0, got {k_minus!r}")
    p2 = float(state.p @ state.p)
    qp = float(state.q @ state.p)
    x = np.empty(4)
    x[0] = (p2 + 1.0) / (p2 - 1.0)
    x[1:] = 2.0 * state.p / (1.0 - p2)
    y = np.empty(4)
    y[0] = -qp
    y[1:] = 0.5 * (1.0 - p2) * state.q + qp * state.p
    return HyperboloidCotangent(x=x, y=y)


def energy_frame(state: PhaseState) -> BelbrunoFrame:
    """Energy-uniform frame map on the positive-energy region.

    At H = +1/2 the pair (r, s) coincides with belbruno_inverse and nu = 1;
    the frame is invariant under the Kepler scaling.
    """
    h = energies(state).h
    if not h > 0.0:
        raise NotPositiveEnergy(f"energy frame needs H > 0, got {h!r}")
    root = math.sqrt(2.0 * h)
    r_len = state.r
    p2 = float(state.p @ state.p)
    qp = float(state.q @ state.p)
    r = np.empty(4)
    r[0] = p2 * r_len - 1.0
    r[1:] = -root * r_len * state.p
    s = np.empty(4)
    s[0] = -root * qp
    s[1:] = -(state.q / r_len - qp * state.p)
    return BelbrunoFrame(r=r, s=s, nu=1.0 / root)


def frame_rotation(frame: BelbrunoFrame) -> HyperboloidCotangent:
    """Hyperbolic rotation of the frame by the parameter in its s0 slot.

    With sigma = s0, the result is x = cosh(sigma) r - sinh(sigma) s and
    y = (-sinh(sigma) r + cosh(sigma) s) * nu, so <y,y>_L = -nu^2.
    """
    sigma = frame.s[0]
    if abs(sigma) > HYPERBOLIC_ARG_MAX:
        raise RangeExceeded(f"rotation parameter {sigma!r} would overflow cosh")
    ch, sh = math.cosh(sigma), math.sinh(sigma)
    x = ch * frame.r - sh * frame.s
    y = (-sh * frame.r + ch * frame.s) * frame.nu
    return HyperboloidCotangent(x=x, y=y)


def ligon_schaaf(state: PhaseState) -> HyperboloidCotangent:
    """Energy-uniform regularizing map for H > 0 (frame map then rotation).

    The image satisfies <x,x>_L = 1, x0 > 0, <x,y>_L = 0 and encodes the
    energy through H = 1/(2|y|^2) with |y|^2 = -<y,y>_L.
    """
    return frame_rotation(energy_frame(state))


def ligon_schaaf_inverse(x, y) -> PhaseState:
    """Invert the positive-energy regularizing map.

    The energy is read from <y,y>_L, and the boost parameter sigma solves
    sinh(sigma) x0 + cosh(sigma) Y0 = sigma with Y = sqrt(2H) y.  On
    admissible inputs |Y0| < x0, so the equation is strictly monotone and a
    bracketed Newton iteration converges globally.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    y2 = -mink_norm_sq(y)
    if abs(mink_norm_sq(x) - 1.0) > SHELL_TOL * max(1.0, float(x @ x)):
        raise ConstraintViolation("ligon_schaaf_inverse needs <x,x>_L = 1")
    if x[0] <= 0.0:
        raise ConstraintViolation("ligon_schaaf_inverse needs x0 > 0")
    if y2 <= 0.0:
        raise ConstraintViolation("ligon_schaaf_inverse needs <y,y>_L < 0")
    pair_scale = max(1.0, float(np.linalg.norm(x)) * float(np.linalg.norm(y)))
    if abs(mink_inner(x, y)) > SHELL_TOL * pair_scale:
        raise ConstraintViolation("ligon_schaaf_inverse needs <x,y>_L = 0")
    root = 1.0 / math.sqrt(y2)  # sqrt(2H)
    h = 0.5 * root * root
    big_y = root * y
    sigma = _solve_boost_parameter(x[0], big_y[0])
    ch, sh = math.cosh(sigma), math.sinh(sigma)
    r = ch * x + sh * big_y
    s = sh * x + ch * big_y
    r_len = (r[0] - 1.0) / (2.0 * h)
    if not r_len > 0.0:
        raise ConstraintViolation("recovered |q| is not positive")
    qp = -sigma / root
    p = -r[1:] / (root * r_len)
    q = r_len * (qp * p - s[1:])
    return PhaseState(q=q, p=p)


def _solve_boost_parameter(x0: float, y0: float) -> float:
    # F(sigma) = sinh(sigma) x0 + cosh(sigma) y0 - sigma.  Since x0 >= 1 and
    # |y0| < x0 on admissible inputs, F' >= sqrt(x0^2 - y0^2) - 1 >= 0 and
    # F runs from -inf to +inf.  The root satisfies |sigma| <~ asinh(|y0|)
    # plus a small margin, so bracket from there by doubling.
    span = 4.0 + math.asinh(abs(y0))
    for _ in range(80):
        if span > HYPERBOLIC_ARG_MAX:
            raise RangeExceeded("boost parameter exceeds double range")
        if math.sinh(-span) * x0 + math.cosh(span) * y0 + span < 0.0:
            break
        span *= 2.0
    lo = -span
    span = 4.0 + math.asinh(abs(y0))
    for _ in range(80):
        if span > HYPERBOLIC_ARG_MAX:
            raise RangeExceeded("boost parameter exceeds double range")
        if math.sinh(span) * x0 + math.cosh(span) * y0 - span > 0.0:
            break
        span *= 2.0
    hi = span
    sigma = math.asinh(-y0)
    for _ in range(60):
        sh, ch = math.sinh(sigma), math.cosh(sigma)
        f = sh * x0 + ch * y0 - sigma
        # Residual scale: the summands reach cosh(sigma) x0, so only a
        # relative stopping rule is attainable in doubles.
        scale = max(1.0, abs(sh * x0), abs(ch * y0), abs(sigma))
        if abs(f) <= 1e-13 * scale or hi - lo <= 1e-15 * max(1.0, abs(sigma)):
            return sigma
        if f > 0.0:
            hi = sigma
        else:
            lo = sigma
        fp = ch * x0 + sh * y0 - 1.0
        if fp > 1e-14:
            sigma -= f / fp
        if not lo < sigma < hi:
            sigma = 0.5 * (lo + hi)
    raise NoConvergence("boost-parameter recovery did not reach tolerance")


def belbruno_integrals(xy: HyperboloidCotangent):
    """Transformed first integrals on T*H3+.

    Returns (L', A', K-) with L'_i = eps_ijk y_j x_k, A'_i = x_i y0 - x0 y_i
    and K- = 2 sqrt(-<y,y>_L) - 2.  Against (q, p) = belbruno_forward(x, y)
    these equal L(q,p), A(q,p) - (H - 1/2) q and K-(q,p).  The angular
    momentum orientation is opposite to the spherical case; with the
    spherical order the identity fails by a sign at every non-circular
    state.
    """
    x, y = xy.x, xy.y
    if x[0] - 1.0 <= POLE_TOL:
        raise SheetViolation("integrals need x0 > 1")
    y2 = -mink_norm_sq(y)
    if y2 <= 0.0:
        raise ConstraintViolation("covector must satisfy <y,y>_L < 0")
    l_prime = np.cross(y[1:], x[1:])
    a_prime = x[1:] * y[0] - x[0] * y[1:]
    return l_prime, a_prime, 2.0 * math.sqrt(y2) - 2.0
