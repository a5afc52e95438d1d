"""Exception types shared across the package."""


class ConeGeometryError(Exception):
    """Base class for all errors raised by this package."""


class ZeroDirection(ConeGeometryError):
    """A direction, generator or normal has (numerically) zero length."""


class DimensionMismatch(ConeGeometryError):
    """Operands live in spaces of different dimensions."""


class UnsupportedDimension(ConeGeometryError):
    """A sampling-based decision was requested above the supported dimension."""


class IterationLimit(ConeGeometryError):
    """An iterative solver exhausted its budget without meeting tolerance."""


class IdentityNotApplicable(ConeGeometryError):
    """The beta/gamma identities require a positive minimal-angle cosine."""


class HypothesisViolated(ConeGeometryError):
    """A theorem checker was called on an instance outside its hypotheses."""


class WitnessNotFound(ConeGeometryError):
    """Numerical search failed to certify a witness the theory guarantees."""


class DichotomyFailure(ConeGeometryError):
    """Neither branch of the primal/polar dichotomy certified numerically."""


class SignConditionViolated(ConeGeometryError):
    """The intermediate-value construction needs opposite strict signs."""


class InsufficientData(ConeGeometryError):
    """Not enough usable iterates to estimate a convergence rate."""
