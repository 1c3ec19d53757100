"""Exception hierarchy shared by all pathring modules."""


class PathringError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PathringError):
    """An input document does not conform to the documented grammar."""


class SubspaceNotContained(PathringError):
    """quotient_basis was given a subspace not contained in the cocycle span."""


class InvalidCDGA(PathringError):
    """A cdga operation was invoked on data violating the cdga axioms."""


class InvalidAugmentation(PathringError):
    """An augmentation is not a unital algebra map to the base field."""


class NotConnective(PathringError):
    """formal_model requires H^0 to be spanned by the unit alone."""


class NotCurveLike(PathringError):
    """formal_model requires vanishing cohomology in degrees >= 2."""


class NonVanishingProducts(PathringError):
    """A chosen degree-1 splitting has a product with nonzero class in H^2."""


class DifferentialSquareNonzero(PathringError):
    """Internal assertion: an assembled total differential fails D*D = 0.

    This indicates a sign-convention bug in the library, never bad user data.
    """


class BasisCapExceeded(PathringError):
    """A requested construction would enumerate more basis words than allowed."""


class TruncationExceeded(PathringError):
    """A word operation would leave the configured truncation window."""


class TruncationMismatch(PathringError):
    """Two truncated objects with different truncation levels were combined."""


class ZeroH0(PathringError):
    """A Kunneth-style argument needs a nonzero H^0 and got zero."""


class NonChainMap(PathringError):
    """A staged replacement map fails to commute with the differentials."""


class DegreeZeroGenerator(PathringError):
    """A replacement step would need a degree-0 generator (outside scope)."""


class PathTooClose(PathringError):
    """A path runs closer to a puncture than the safety clearance."""


class ToleranceNotMet(PathringError):
    """The adaptive integrator could not reach the requested tolerance."""


class EndpointMismatch(PathringError):
    """Path composition requires the endpoints to match exactly."""
