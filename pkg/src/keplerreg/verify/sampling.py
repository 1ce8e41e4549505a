"""Deterministic random sampling of states, bundle points and group elements.

Every sampler takes a numpy Generator so suites and tests are reproducible
from an explicit seed.  Phase-space states are built from a log-uniform
radius, a uniform direction and a momentum constructed to hit a target
energy and eccentricity, then accepted by rejection where the geometry
demands it.
"""

from __future__ import annotations

import math

import numpy as np

from ..geometry import HyperboloidCotangent, Quaternion, SphereCotangent
from ..kepler import PhaseState
from ..symmetry import GMinusElement, GPlusElement, GZeroElement, LieAlgebraPair


def random_direction(rng) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_unit_quaternion(rng) -> Quaternion:
    v = rng.normal(size=4)
    v /= np.linalg.norm(v)
    return Quaternion.from_array(v)


def random_pure_quaternion(rng, scale: float = 1.0) -> Quaternion:
    return Quaternion.from_vector(scale * rng.normal(size=3))


def _orthogonal_unit(rng, direction: np.ndarray) -> np.ndarray:
    while True:
        v = rng.normal(size=3)
        v -= (v @ direction) * direction
        n = np.linalg.norm(v)
        if n > 1e-8:
            return v / n


def _state_for(rng, h: float, e: float, r_lo: float, r_hi: float) -> PhaseState:
    """State with exact energy h and eccentricity e via rejection on |q|."""
    for _ in range(1000):
        r = math.exp(rng.uniform(math.log(r_lo), math.log(r_hi)))
        p_sq = 2.0 * (h + 1.0 / r)
        if p_sq <= 1e-8:
            continue
        l_sq = (e * e - 1.0) / (2.0 * h) if h != 0.0 else 0.0
        if h == 0.0:
            # Parabolic: eccentricity is forced to 1; draw the latus rectum
            # instead, bounded by the periapsis condition latus <= 2 r.
            l_sq = rng.uniform(0.05, 0.98) * 2.0 * r
        if l_sq <= 0.0:
            continue
        sin_sq = l_sq / (r * r * p_sq)
        if sin_sq > 1.0 + 1e-12:
            continue
        sin_gamma = math.sqrt(min(1.0, sin_sq))
        q_hat = random_direction(rng)
        e_hat = _orthogonal_unit(rng, q_hat)
        cos_gamma = math.sqrt(max(0.0, 1.0 - sin_gamma * sin_gamma))
        if rng.random() < 0.5:
            cos_gamma = -cos_gamma
        p = math.sqrt(p_sq) * (cos_gamma * q_hat + sin_gamma * e_hat)
        return PhaseState(q=r * q_hat, p=p)
    raise RuntimeError("state sampler failed to find an admissible radius")


def _bound_window(a: float, e: float, r_range) -> tuple:
    """Radial window of a bound conic intersected with the sampling range."""
    lo = max(r_range[0], a * (1.0 - e) * 1.02 + 1e-6)
    hi = min(r_range[1], a * (1.0 + e) * 0.98)
    if hi <= lo:
        lo, hi = a * (1.0 - 0.5 * e), a * (1.0 + 0.5 * e)
    return lo, hi


def random_negative_state(
    rng, e_max: float = 0.9, h_range=(-1.4, -0.08), r_range=(0.2, 5.0)
) -> PhaseState:
    h = rng.uniform(*h_range)
    e = rng.uniform(0.0, e_max)
    # Keep |q| inside the conic's radial range for the drawn eccentricity.
    lo, hi = _bound_window(-1.0 / (2.0 * h), e, r_range)
    return _state_for(rng, h, e, lo, hi)


def random_positive_state(
    rng,
    e_max: float = 5.0,
    psi_max: float = 5.0,
    h_range=(0.08, 1.4),
    sigma_max: float = 6.0,
) -> PhaseState:
    """Hyperbolic state with e <= e_max and |psi_h| <= psi_max.

    ``sigma_max`` bounds the boost parameter |e sinh(psi_h)| of the
    energy-uniform rotation; beyond roughly exp(sigma) ~ 1e3 the rotated
    coordinates grow past what double precision can certify pointwise.
    """
    for _ in range(1000):
        h = rng.uniform(*h_range)
        e = rng.uniform(1.02, e_max)
        a = 1.0 / (2.0 * h)
        psi_cap = min(psi_max, math.asinh(sigma_max / e))
        r_peri = a * (e - 1.0)
        r_far = a * (e * math.cosh(psi_cap) - 1.0)
        # Radius floor 0.2 as in the global sampling policy; near-parabolic
        # periapses otherwise shrink below what fixed-step differencing
        # resolves.
        lo = max(0.2, r_peri * 1.02 + 1e-9)
        hi = r_far * 0.98
        if hi <= lo * 1.02:
            continue
        state = _state_for(rng, h, e, lo, hi)
        if abs(math.sqrt(2.0 * h) * float(state.q @ state.p)) <= sigma_max:
            return state
    raise RuntimeError("positive-state sampler failed to satisfy the boost cap")


def random_zero_state(rng, r_range=(0.2, 5.0)) -> PhaseState:
    r = math.exp(rng.uniform(math.log(r_range[0]), math.log(r_range[1])))
    return _state_for(rng, 0.0, 1.0, r * 0.999, r * 1.001)


def random_shell_state(rng, which: str, e_max: float = 0.9) -> PhaseState:
    """State exactly on the K+ = 0, K- = 0 or K0 = 0 shell."""
    if which == "plus":
        e = rng.uniform(0.0, e_max)
        lo, hi = _bound_window(1.0, e, (0.25, 1.95))
        return _state_for(rng, -0.5, e, lo, hi)
    if which == "minus":
        e = rng.uniform(1.02, max(2.0, e_max))
        r_peri = e - 1.0
        lo = max(0.2, r_peri * 1.02 + 1e-9)
        return _state_for(rng, 0.5, e, lo, lo + 6.0)
    if which == "zero":
        return random_zero_state(rng)
    raise ValueError(f"unknown shell {which!r}")


def random_offshell_state(rng, r_range=(0.1, 10.0), p_max: float = 5.0) -> PhaseState:
    r = math.exp(rng.uniform(math.log(r_range[0]), math.log(r_range[1])))
    p = rng.uniform(0.05, p_max) * random_direction(rng)
    return PhaseState(q=r * random_direction(rng), p=p)


def random_sphere_cotangent(rng, y_norm: float = 1.0) -> SphereCotangent:
    """Point of T*S^3 with |y| = y_norm, kept away from the pole x0 = 1."""
    while True:
        x = rng.normal(size=4)
        x /= np.linalg.norm(x)
        if 1.0 - x[0] > 1e-3:
            break
    y = rng.normal(size=4)
    y -= (y @ x) * x
    y *= y_norm / np.linalg.norm(y)
    return SphereCotangent(x=x, y=y)


def random_hyperboloid_cotangent(rng, y_norm: float = 1.0) -> HyperboloidCotangent:
    """Point of T*H3+ with sqrt(-<y,y>_L) = y_norm, off the sheet pole."""
    while True:
        vec = rng.normal(size=3)
        x = np.empty(4)
        x[1:] = vec
        x[0] = math.sqrt(1.0 + float(vec @ vec))
        if x[0] - 1.0 > 1e-3:
            break
    metric = np.array([1.0, -1.0, -1.0, -1.0])
    y = rng.normal(size=4)
    y -= (float((metric * y) @ x)) * x  # Minkowski projection off timelike x
    norm = math.sqrt(-float((metric * y) @ y))
    y *= y_norm / norm
    return HyperboloidCotangent(x=x, y=y)


def random_gplus(rng) -> GPlusElement:
    return GPlusElement(
        alpha1=random_unit_quaternion(rng), alpha2=random_unit_quaternion(rng)
    )


def random_gminus(rng, tau_max: float = 2.0) -> GMinusElement:
    """Boost of a random orthogonal unit pair: alpha = cosh(tau) u,
    beta = sinh(tau) v with u, v unit and Re(u v*) = 0."""
    u = random_unit_quaternion(rng)
    while True:
        w = rng.normal(size=4)
        w -= (w @ u.to_array()) * u.to_array()
        n = np.linalg.norm(w)
        if n > 1e-8:
            v = Quaternion.from_array(w / n)
            break
    tau = rng.uniform(-tau_max, tau_max)
    return GMinusElement(alpha=math.cosh(tau) * u, beta=math.sinh(tau) * v)


def random_gzero(rng, scale: float = 1.0) -> GZeroElement:
    alpha = random_unit_quaternion(rng)
    b = random_pure_quaternion(rng, scale)
    # c = b alpha satisfies Re(c* alpha) = Re(alpha* b* alpha) = 0 exactly.
    return GZeroElement(alpha=alpha, c=b * alpha)


def random_algebra_pair(rng, scale: float = 1.0) -> LieAlgebraPair:
    return LieAlgebraPair(
        a=random_pure_quaternion(rng, scale), b=random_pure_quaternion(rng, scale)
    )
