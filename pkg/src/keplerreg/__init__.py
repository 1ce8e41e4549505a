"""Regularizing maps for the Kepler problem.

The package identifies Kepler motion at fixed energy sign with geodesic
motion on a constant-curvature space: the 3-sphere for bound orbits, the
upper hyperboloid sheet for scattering orbits and affine lines for the
parabolic boundary case.  Energy-uniform versions of these identifications
(the Ligon-Schaaf maps) carry an extra rotation whose angle is the
equation of center: the difference between the auxiliary and mean
anomalies.  A certification harness measures every identity numerically.
"""

from . import anomalies, geometry, kepler, negative, positive, symmetry, verify, zero
from .errors import KeplerRegError
from .geometry import HyperboloidCotangent, Quaternion, SphereCotangent
from .kepler import (
    EnergyClass,
    FirstIntegrals,
    OrbitElements,
    PhaseState,
    classify,
    elements_from_state,
    energies,
    first_integrals,
    scale_state,
)
from .zero import LinePoint

__all__ = [
    "EnergyClass",
    "FirstIntegrals",
    "HyperboloidCotangent",
    "KeplerRegError",
    "LinePoint",
    "OrbitElements",
    "PhaseState",
    "Quaternion",
    "SphereCotangent",
    "anomalies",
    "classify",
    "elements_from_state",
    "energies",
    "first_integrals",
    "geometry",
    "kepler",
    "negative",
    "positive",
    "scale_state",
    "symmetry",
    "verify",
    "zero",
]

__version__ = "0.1.0"
