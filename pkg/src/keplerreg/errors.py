"""Exception types shared across the package.

Every domain error derives from :class:`KeplerRegError` so callers (and the
command line front end) can catch the whole family at once.
"""


class KeplerRegError(Exception):
    """Base class for all errors raised by this package."""


class ZeroQuaternion(KeplerRegError):
    """Inverse of the zero quaternion was requested."""


class ConstraintViolation(KeplerRegError):
    """Input violates a geometric membership constraint beyond tolerance."""


class DegenerateBasis(KeplerRegError):
    """Plane basis is (numerically) linearly dependent."""


class RangeExceeded(KeplerRegError):
    """A hyperbolic-function argument would overflow double precision."""


class OriginCollision(KeplerRegError):
    """Position vector vanishes; the Kepler Hamiltonian is singular there."""


class NonpositiveScale(KeplerRegError):
    """Scaling factor must be strictly positive."""


class RectilinearOrbit(KeplerRegError):
    """Angular momentum vanishes; conic elements are undefined."""


class EccentricityOutOfRange(KeplerRegError):
    """Eccentricity is incompatible with the requested orbit regime."""


class ApoapsisBranch(KeplerRegError):
    """True anomaly pi requested where the conic has no apoapsis."""


class HyperbolicDomain(KeplerRegError):
    """Radius formula evaluated outside the hyperbolic branch."""


class NorthPole(KeplerRegError):
    """Stereographic projection blows up at the pole x0 = 1."""


class OffShell(KeplerRegError):
    """State is not on the required energy shell."""


class NotNegativeEnergy(KeplerRegError):
    """Operation requires H < 0."""


class NotPositiveEnergy(KeplerRegError):
    """Operation requires H > 0."""


class NotParabolic(KeplerRegError):
    """Operation requires parabolic (H = 0) orbit elements."""


class DegenerateImage(KeplerRegError):
    """Point cannot lie in the image of the regularizing map."""


class SheetViolation(KeplerRegError):
    """Point is not on the upper hyperboloid sheet (or sits on its pole)."""


class NoConvergence(KeplerRegError):
    """Iterative inversion failed to reach tolerance."""


class ZeroMomentum(KeplerRegError):
    """Momentum vanishes; the zero-energy chart is singular there."""


class DegenerateLine(KeplerRegError):
    """Regularized momentum vanishes; no line direction is defined."""


class SingularDenominator(KeplerRegError):
    """Group action denominator is not invertible."""


class CollisionApproach(KeplerRegError):
    """Trajectory came too close to the origin for reliable integration."""


class StepFailure(KeplerRegError):
    """Adaptive integrator step size underflowed."""


class DomainEscape(KeplerRegError):
    """Finite-difference stencil left the map's domain."""


class UnknownSuite(KeplerRegError):
    """Verification suite name is not registered."""
