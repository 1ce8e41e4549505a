"""Quaternion algebra and the constant-curvature geometry behind the maps.

Three pieces of machinery live here: Hamilton quaternions (the carrier of
every group action in :mod:`keplerreg.symmetry` and of the zero-energy
chart), the Euclidean and Minkowski pairings on R^4, and closed-form
geodesics of the unit 3-sphere and of the upper hyperboloid sheet

    H3+ = {x in R^{1,3} : <x,x>_L = 1, x0 > 0},   <u,w>_L = u0 w0 - u.w.

The geodesics double as independent oracles: the regularized Kepler flow is
required to land on them, and a hyperbolic geodesic must stay inside the
2-plane spanned by its initial data (that plane-section property is checked
numerically through :func:`plane_containment_residual`).

All functions are pure and all values are treated as immutable, so the
module is safe for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstraintViolation,
    DegenerateBasis,
    RangeExceeded,
    ZeroQuaternion,
)

#: Absolute tolerance for membership in the constraint sets (unit sphere,
#: hyperboloid, orthogonality).  One order of magnitude above the roundoff
#: accumulated by composing the regularizing maps in double precision.
CONSTRAINT_TOL = 1e-10

#: cosh/sinh arguments above this overflow double precision.
HYPERBOLIC_ARG_MAX = 700.0


class Quaternion:
    """Hamilton quaternion ``w + x i + y j + z k`` with float components."""

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w, x, y, z):
        self.w = float(w)
        self.x = float(x)
        self.y = float(y)
        self.z = float(z)

    @classmethod
    def identity(cls) -> "Quaternion":
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_vector(cls, v) -> "Quaternion":
        """Embed a 3-vector as the pure quaternion (0, v).

        The embedding is always explicit; nothing in this package converts
        3-vectors to quaternions implicitly.
        """
        return cls(0.0, v[0], v[1], v[2])

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        """Build from a length-4 array ordered (w, x, y, z)."""
        return cls(a[0], a[1], a[2], a[3])

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    @property
    def vector(self) -> np.ndarray:
        """The (x, y, z) part as a plain 3-array."""
        return np.array([self.x, self.y, self.z])

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm_sq(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def inverse(self) -> "Quaternion":
        n2 = self.norm_sq()
        if n2 == 0.0:
            raise ZeroQuaternion("zero quaternion has no inverse")
        return Quaternion(self.w / n2, -self.x / n2, -self.y / n2, -self.z / n2)

    def is_pure(self, tol: float = 1e-13) -> bool:
        return abs(self.w) <= tol * max(1.0, self.norm())

    def pure_vector(self, tol: float = 1e-10) -> np.ndarray:
        """Project to the 3-vector part, insisting the w component is noise."""
        if not self.is_pure(tol):
            raise ConstraintViolation(
                f"quaternion is not pure: w = {self.w!r}"
            )
        return self.vector

    def exp(self) -> "Quaternion":
        """Quaternion exponential; maps pure quaternions into the unit group."""
        v = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        scale = math.exp(self.w)
        if v == 0.0:
            return Quaternion(scale, 0.0, 0.0, 0.0)
        f = scale * math.sin(v) / v
        return Quaternion(scale * math.cos(v), f * self.x, f * self.y, f * self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            a, b = self, other
            return Quaternion(
                a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
            )
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self * (1.0 / other)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)
        return NotImplemented

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __repr__(self):
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product, as a free function for symmetry with quat_inv."""
    return a * b


def quat_inv(a: Quaternion) -> Quaternion:
    """Multiplicative inverse; for a pure quaternion this is -a/|a|^2."""
    return a.inverse()


def mink_inner(u, w) -> float:
    """Minkowski pairing of signature (+,-,-,-) on R^4."""
    return float(u[0] * w[0] - u[1] * w[1] - u[2] * w[2] - u[3] * w[3])


def mink_norm_sq(u) -> float:
    return mink_inner(u, u)


def _as_vec4(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (4,):
        raise ConstraintViolation(f"expected a 4-vector, got shape {a.shape}")
    return a


@dataclass(frozen=True, eq=False)
class SphereCotangent:
    """A point (x, y) of T*S^3 embedded in R^4 x R^4.

    Membership constraints |x| = 1 and <x, y> = 0 are enforced on
    construction; |y| = 1 additionally holds on the unit sub-bundle and can
    be queried with :meth:`is_unit`.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", _as_vec4(self.x))
        object.__setattr__(self, "y", _as_vec4(self.y))
        if abs(np.linalg.norm(self.x) - 1.0) > CONSTRAINT_TOL:
            raise ConstraintViolation(f"|x| = {np.linalg.norm(self.x)!r} is not 1")
        if abs(float(self.x @ self.y)) > CONSTRAINT_TOL:
            raise ConstraintViolation(f"<x, y> = {float(self.x @ self.y)!r} is not 0")

    def is_unit(self, tol: float = CONSTRAINT_TOL) -> bool:
        return abs(np.linalg.norm(self.y) - 1.0) <= tol


@dataclass(frozen=True, eq=False)
class HyperboloidCotangent:
    """A point (x, y) of T*H^3+ in Minkowski coordinates.

    Constraints <x,x>_L = 1, x0 > 0 and <x,y>_L = 0 are enforced on
    construction; <y,y>_L = -1 holds on the unit sub-bundle.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", _as_vec4(self.x))
        object.__setattr__(self, "y", _as_vec4(self.y))
        # The point can sit far up the sheet, where the Minkowski defect is
        # only representable relative to the squared Euclidean size.
        x_scale = max(1.0, float(self.x @ self.x))
        if abs(mink_norm_sq(self.x) - 1.0) > CONSTRAINT_TOL * x_scale:
            raise ConstraintViolation(f"<x,x>_L = {mink_norm_sq(self.x)!r} is not 1")
        if self.x[0] <= 0.0:
            raise ConstraintViolation("x is not on the upper sheet (x0 <= 0)")
        pair_scale = max(
            1.0, float(np.linalg.norm(self.x)) * float(np.linalg.norm(self.y))
        )
        if abs(mink_inner(self.x, self.y)) > CONSTRAINT_TOL * pair_scale:
            raise ConstraintViolation(
                f"<x,y>_L = {mink_inner(self.x, self.y)!r} is not 0"
            )

    def is_unit(self, tol: float = CONSTRAINT_TOL) -> bool:
        y_scale = max(1.0, float(self.y @ self.y))
        return abs(mink_norm_sq(self.y) + 1.0) <= tol * y_scale


def great_circle(r, s, angle: float, tol: float = CONSTRAINT_TOL):
    """Rotate the orthonormal frame (r, s) along its great circle.

    Returns (cos a * r + sin a * s, -sin a * r + cos a * s).  Inputs must
    satisfy |r| = |s| = 1 and <r, s> = 0; the output satisfies the same
    constraints, so repeated application realizes the rotation group law.
    """
    r = _as_vec4(r)
    s = _as_vec4(s)
    if abs(np.linalg.norm(r) - 1.0) > tol or abs(np.linalg.norm(s) - 1.0) > tol:
        raise ConstraintViolation("great_circle frame vectors must be unit")
    if abs(float(r @ s)) > tol:
        raise ConstraintViolation("great_circle frame vectors must be orthogonal")
    c, sn = math.cos(angle), math.sin(angle)
    return c * r + sn * s, -sn * r + c * s


def hyperbolic_geodesic(r, s, param: float, tol: float = CONSTRAINT_TOL):
    """Flow the hyperboloid frame (r, s) along its geodesic.

    Returns (cosh t * r + sinh t * s, sinh t * r + cosh t * s) for
    <r,r>_L = 1, <s,s>_L = -1, <r,s>_L = 0 and r0 > 0.  The parameter is
    capped at 700 in absolute value to stay inside double-precision range.
    """
    r = _as_vec4(r)
    s = _as_vec4(s)
    if abs(param) > HYPERBOLIC_ARG_MAX:
        raise RangeExceeded(f"geodesic parameter {param!r} would overflow cosh")
    if abs(mink_norm_sq(r) - 1.0) > tol or abs(mink_norm_sq(s) + 1.0) > tol:
        raise ConstraintViolation("hyperbolic frame must satisfy <r,r>=1, <s,s>=-1")
    if abs(mink_inner(r, s)) > tol:
        raise ConstraintViolation("hyperbolic frame vectors must be orthogonal")
    if r[0] <= 0.0:
        raise ConstraintViolation("hyperbolic frame base point must have r0 > 0")
    ch, sh = math.cosh(param), math.sinh(param)
    return ch * r + sh * s, sh * r + ch * s


def plane_containment_residual(points, basis) -> float:
    """Largest Euclidean distance from the points to span{basis} in R^4.

    This is the oracle for the plane-section property of hyperbolic
    geodesics: a geodesic through (r, s) never leaves span{r, s}.
    """
    b1 = _as_vec4(basis[0])
    b2 = _as_vec4(basis[1])
    gram = np.array([[b1 @ b1, b1 @ b2], [b1 @ b2, b2 @ b2]])
    if abs(np.linalg.det(gram)) < 1e-12:
        raise DegenerateBasis("plane basis is numerically dependent")
    worst = 0.0
    for p in points:
        p = _as_vec4(p)
        coeff = np.linalg.solve(gram, np.array([b1 @ p, b2 @ p]))
        dist = float(np.linalg.norm(p - coeff[0] * b1 - coeff[1] * b2))
        worst = max(worst, dist)
    return worst
