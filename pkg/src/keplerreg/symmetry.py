"""Quaternionic symmetry groups of the normalized Kepler Hamiltonians.

Three groups act on phase space preserving K+, K- and K0 respectively:

  * pairs of unit quaternions (a1, a2), acting through
    (q, p) -> ((b p + a) q (b p + a)*, (a p + b)(b p + a)^{-1})
    with a = (a1 + a2)/2, b = (a2 - a1)/2;
  * pairs (alpha, beta) with |alpha|^2 - |beta|^2 = 1 and Re(alpha beta*) = 0,
    acting through
    (q, p) -> ((beta p + alpha) q (beta p + alpha)*,
               (alpha p - beta)(beta p + alpha)^{-1});
  * pairs (alpha, c) with |alpha| = 1 and Re(c* alpha) = 0, acting through
    (q, p) -> ((c p + alpha) q (c p + alpha)*, alpha p (c p + alpha)^{-1}),
    which intertwines with the zero-energy chart via
    (alpha, c) * (x, y) = (c alpha^{-1} + alpha x alpha^{-1},
                           alpha y alpha^{-1}).

Each action is symplectic, and its momentum map reproduces the classical
first integrals: combinations of the angular momentum and the
Laplace-Runge-Lenz vector, transported to the regularized coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolation, SingularDenominator
from .geometry import HyperboloidCotangent, Quaternion, SphereCotangent
from .kepler import PhaseState
from .zero import LinePoint

GROUP_TOL = 1e-10


def _check_unit(q: Quaternion, label: str):
    if abs(q.norm() - 1.0) > GROUP_TOL:
        raise ConstraintViolation(f"{label} must be a unit quaternion")


@dataclass(frozen=True, eq=False)
class GPlusElement:
    """Pair of unit quaternions; the symmetry group of K+."""

    alpha1: Quaternion
    alpha2: Quaternion

    def __post_init__(self):
        _check_unit(self.alpha1, "alpha1")
        _check_unit(self.alpha2, "alpha2")


@dataclass(frozen=True, eq=False)
class GMinusElement:
    """Pair with |alpha|^2 - |beta|^2 = 1, Re(alpha beta*) = 0; preserves K-."""

    alpha: Quaternion
    beta: Quaternion

    def __post_init__(self):
        if abs(self.alpha.norm_sq() - self.beta.norm_sq() - 1.0) > GROUP_TOL:
            raise ConstraintViolation("|alpha|^2 - |beta|^2 must equal 1")
        if abs((self.alpha * self.beta.conjugate()).w) > GROUP_TOL:
            raise ConstraintViolation("alpha beta* must have zero real part")


@dataclass(frozen=True, eq=False)
class GZeroElement:
    """Pair (alpha, c) with |alpha| = 1 and Re(c* alpha) = 0; preserves K0."""

    alpha: Quaternion
    c: Quaternion

    def __post_init__(self):
        _check_unit(self.alpha, "alpha")
        if abs((self.c.conjugate() * self.alpha).w) > GROUP_TOL:
            raise ConstraintViolation("c* alpha must have zero real part")


@dataclass(frozen=True, eq=False)
class LieAlgebraPair:
    """Pair of pure quaternions, the Lie algebra carrier for all three groups."""

    a: Quaternion
    b: Quaternion

    def __post_init__(self):
        if not (self.a.is_pure(1e-12) and self.b.is_pure(1e-12)):
            raise ConstraintViolation("Lie algebra elements must be pure")


def _pure_state(q: Quaternion, p: Quaternion) -> PhaseState:
    return PhaseState(q=q.pure_vector(tol=1e-10), p=p.pure_vector(tol=1e-10))


def act_gplus(g: GPlusElement, state: PhaseState) -> PhaseState:
    """Action on phase space; preserves K+ and purity of (q, p)."""
    a = (g.alpha1 + g.alpha2) * 0.5
    b = (g.alpha2 - g.alpha1) * 0.5
    p = Quaternion.from_vector(state.p)
    q = Quaternion.from_vector(state.q)
    den = b * p + a
    if den.norm() <= 1e-12:
        raise SingularDenominator("b p + a is not invertible at this state")
    new_q = den * q * den.conjugate()
    new_p = (a * p + b) * den.inverse()
    return _pure_state(new_q, new_p)


def act_gminus(g: GMinusElement, state: PhaseState) -> PhaseState:
    """Action on phase space; preserves K-."""
    p = Quaternion.from_vector(state.p)
    q = Quaternion.from_vector(state.q)
    den = g.beta * p + g.alpha
    if den.norm() <= 1e-12:
        raise SingularDenominator("beta p + alpha is not invertible at this state")
    new_q = den * q * den.conjugate()
    new_p = (g.alpha * p - g.beta) * den.inverse()
    return _pure_state(new_q, new_p)


def act_gzero(g: GZeroElement, state: PhaseState) -> PhaseState:
    """Action on phase space; preserves K0."""
    p = Quaternion.from_vector(state.p)
    q = Quaternion.from_vector(state.q)
    den = g.c * p + g.alpha
    if den.norm() <= 1e-12:
        raise SingularDenominator("c p + alpha is not invertible at this state")
    new_q = den * q * den.conjugate()
    new_p = g.alpha * p * den.inverse()
    return _pure_state(new_q, new_p)


def act_gzero_line(g: GZeroElement, pt: LinePoint) -> LinePoint:
    """Chart-side action (c a^{-1} + a x a^{-1}, a y a^{-1}).

    Intertwines with line_forward: acting then mapping equals mapping then
    acting on phase space.
    """
    a_inv = g.alpha.inverse()
    x = Quaternion.from_vector(pt.x)
    y = Quaternion.from_vector(pt.y)
    new_x = g.c * a_inv + g.alpha * x * a_inv
    new_y = g.alpha * y * a_inv
    return LinePoint(x=new_x.pure_vector(tol=1e-10), y=new_y.pure_vector(tol=1e-10))


def compose_gplus(g2: GPlusElement, g1: GPlusElement) -> GPlusElement:
    """Componentwise product; act(g2, act(g1, s)) = act(compose(g2, g1), s)."""
    return GPlusElement(alpha1=g2.alpha1 * g1.alpha1, alpha2=g2.alpha2 * g1.alpha2)


def compose_gminus(g2: GMinusElement, g1: GMinusElement) -> GMinusElement:
    """Twisted product (a2 a1 - b2 b1, a2 b1 + b2 a1), the left-action law."""
    return GMinusElement(
        alpha=g2.alpha * g1.alpha - g2.beta * g1.beta,
        beta=g2.alpha * g1.beta + g2.beta * g1.alpha,
    )


def compose_gzero(g2: GZeroElement, g1: GZeroElement) -> GZeroElement:
    """Semidirect product (a2 a1, a2 c1 + c2 a1)."""
    return GZeroElement(
        alpha=g2.alpha * g1.alpha, c=g2.alpha * g1.c + g2.c * g1.alpha
    )


def gplus_one_parameter(ab: LieAlgebraPair, t: float) -> GPlusElement:
    """One-parameter subgroup (exp(t a), exp(t b))."""
    return GPlusElement(alpha1=(ab.a * t).exp(), alpha2=(ab.b * t).exp())


def gzero_one_parameter(ab: LieAlgebraPair, t: float) -> GZeroElement:
    """One-parameter subgroup (exp(t a), t b exp(t a)).

    The pair satisfies the group constraint exactly: c* alpha = t a* for
    pure b conjugated by the unit exp(t a) stays pure.
    """
    alpha = (ab.a * t).exp()
    return GZeroElement(alpha=alpha, c=(ab.b * t) * alpha)


def generator_gplus(ab: LieAlgebraPair, xy: SphereCotangent):
    """Infinitesimal action (a x - x b, a y - y b) on T*S^3.

    The output is tangent to the constraint set: it kills d|x|^2 and
    d<x, y> to first order.
    """
    x = Quaternion.from_array(xy.x)
    y = Quaternion.from_array(xy.y)
    dx = ab.a * x - x * ab.b
    dy = ab.a * y - y * ab.b
    return dx.to_array(), dy.to_array()


def generator_gzero(ab: LieAlgebraPair, pt: LinePoint):
    """Infinitesimal chart-side action (a x - x a + b, a y - y a)."""
    x = Quaternion.from_vector(pt.x)
    y = Quaternion.from_vector(pt.y)
    dx = ab.a * x - x * ab.a + ab.b
    dy = ab.a * y - y * ab.a
    return dx.pure_vector(tol=1e-12), dy.pure_vector(tol=1e-12)


def gzero_bracket(ab1: LieAlgebraPair, ab2: LieAlgebraPair) -> LieAlgebraPair:
    """Lie bracket of the zero-energy algebra.

    Expanding the group law to second order gives
    [(a1,b1),(a2,b2)] = (a1 a2 - a2 a1, a1 b2 - b2 a1 + b1 a2 - a2 b1);
    the generator commutator satisfies [V_1, V_2] = -V_[1,2] (left action).
    """
    a1, b1, a2, b2 = ab1.a, ab1.b, ab2.a, ab2.b
    return LieAlgebraPair(
        a=a1 * a2 - a2 * a1,
        b=a1 * b2 - b2 * a1 + b1 * a2 - a2 * b1,
    )


def moment_gplus(ab: LieAlgebraPair, xy: SphereCotangent) -> float:
    """Momentum map of the K+ symmetry at (x, y).

    Evaluates both displayed forms, the pairing <y, a x - x b> and the
    component combination (a+b).L' + (b-a).A' with L' = x_vec x y_vec and
    A' = x_vec y0 - x0 y_vec, checks they agree, and returns the value.
    """
    dx, _ = generator_gplus(ab, xy)
    pairing = float(xy.y @ dx)
    av, bv = ab.a.vector, ab.b.vector
    l_prime = np.cross(xy.x[1:], xy.y[1:])
    a_prime = xy.x[1:] * xy.y[0] - xy.x[0] * xy.y[1:]
    component = float((av + bv) @ l_prime + (bv - av) @ a_prime)
    if abs(pairing - component) > 1e-12 * max(1.0, abs(pairing)):
        raise ConstraintViolation("momentum map forms disagree; input is corrupt")
    return component


def moment_gminus(ab: LieAlgebraPair, xy: HyperboloidCotangent) -> float:
    """Momentum map of the K- symmetry at (x, y) on T*H3+.

    2 b . (x_vec y0 - x0 y_vec) + 2 a . (x_vec x y_vec); against the
    Belbruno image this is 2 b . A' + 2 a . L.
    """
    av, bv = ab.a.vector, ab.b.vector
    l_prime = np.cross(xy.x[1:], xy.y[1:])
    a_prime = xy.x[1:] * xy.y[0] - xy.x[0] * xy.y[1:]
    return float(2.0 * (bv @ a_prime) + 2.0 * (av @ l_prime))


def moment_gzero(ab: LieAlgebraPair, pt: LinePoint) -> float:
    """Momentum map of the K0 symmetry at (x, y): a.(x ^ y) + b.y.

    On the zero shell this equals a.L + b.A of the phase-space image.
    """
    av, bv = ab.a.vector, ab.b.vector
    return float(av @ np.cross(pt.x, pt.y) + bv @ pt.y)
