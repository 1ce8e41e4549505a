"""Finite-difference Jacobians and the symplectic-form residual.

The symplecticity certificate evaluates the pullback of the canonical
two-form through a central-difference Jacobian: for every pair (u, v) of
coordinate basis vectors it compares omega_image(D u, D v) with
omega_domain(u, v) and reports the largest mismatch.  Both spaces carry the
canonical form of their ambient R^{2n} in a (position block, momentum
block) split, which for the embedded images T*S^3 and T*H3+ restricts to
the correct symplectic form.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainEscape
from ..kepler import PhaseState


def state_to_vec(state: PhaseState) -> np.ndarray:
    return np.concatenate([state.q, state.p])


def vec_to_state(y: np.ndarray) -> PhaseState:
    return PhaseState(q=y[:3], p=y[3:])


def fd_jacobian(fn, at: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Central-difference Jacobian of fn: R^n -> R^m at the given point.

    Exceptions raised by fn on a perturbed point are reported as
    DomainEscape; the truncation error is O(step^2).
    """
    at = np.asarray(at, dtype=float)
    columns = []
    for i in range(at.size):
        shift = np.zeros_like(at)
        shift[i] = step
        try:
            plus = np.asarray(fn(at + shift), dtype=float)
            minus = np.asarray(fn(at - shift), dtype=float)
        except Exception as exc:  # noqa: BLE001 - re-raised with context
            raise DomainEscape(
                f"map not evaluable at perturbation of coordinate {i}"
            ) from exc
        columns.append((plus - minus) / (2.0 * step))
    return np.column_stack(columns)


def step_halving_ratio(fn, at: np.ndarray, step: float = 1e-4) -> float:
    """Richardson ratio ||D(h) - D(h/2)|| / ||D(h/2) - D(h/4)||.

    Central differences have error O(h^2), so the ratio sits near 4.
    """
    d1 = fd_jacobian(fn, at, step)
    d2 = fd_jacobian(fn, at, step / 2.0)
    d4 = fd_jacobian(fn, at, step / 4.0)
    num = float(np.linalg.norm(d1 - d2))
    den = float(np.linalg.norm(d2 - d4))
    return num / den


def canonical_form_value(u: np.ndarray, v: np.ndarray, metric=None) -> float:
    """Two-form sum(dx_i ^ dy^i) on R^{2n} split in halves.

    ``metric`` raises the index of the momentum block: None gives the
    Euclidean pairing sum(dx_i ^ dy_i); the Minkowski diagonal
    (1, -1, -1, -1) gives dx0 ^ dy0 - sum(dx_i ^ dy_i), the canonical form
    of the hyperboloid's ambient coordinates.
    """
    n = u.size // 2
    if metric is None:
        return float(u[:n] @ v[n:] - u[n:] @ v[:n])
    return float((metric * u[:n]) @ v[n:] - (metric * u[n:]) @ v[:n])


def symplectic_residual(fn, at: np.ndarray, step: float = 1e-5, image_metric=None) -> float:
    """Largest pullback defect of the canonical form under fn at a point.

    fn maps R^{2n} (canonical coordinates) into R^{2m}; the image carries
    the canonical form of its split, with an optional diagonal metric
    raising the index (Minkowski pairing for the hyperboloid coordinates).
    A symplectic map gives residuals at the finite-difference noise floor;
    the calibration map (q, p) -> (2q, p) is flagged with residual 1.
    """
    at = np.asarray(at, dtype=float)
    n = at.size
    if n % 2:
        raise ValueError("domain dimension must be even")
    jac = fd_jacobian(fn, at, step)
    if jac.shape[0] % 2:
        raise ValueError("image dimension must be even")
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            u = np.zeros(n)
            v = np.zeros(n)
            u[i] = 1.0
            v[j] = 1.0
            expected = canonical_form_value(u, v)
            measured = canonical_form_value(jac[:, i], jac[:, j], metric=image_metric)
            worst = max(worst, abs(measured - expected))
    return worst
