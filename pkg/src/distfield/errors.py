"""Exception types shared across the package."""


class DistanceFieldError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSpec(DistanceFieldError):
    """A shape specification violates its validity constraints."""


class DimensionMismatch(DistanceFieldError):
    """A query point does not match the shape's ambient dimension."""


class NotOnBoundary(DistanceFieldError):
    """A point expected on the boundary is too far from it."""


class NotC1(DistanceFieldError):
    """The boundary is not continuously differentiable at the given point."""


class TruncationExceeded(DistanceFieldError):
    """A spiral query falls inside the truncated apex zone where answers would be unreliable."""


class EmptyBand(DistanceFieldError):
    """The grid does not intersect the initialization band around the boundary."""


class LevelOutOfRange(DistanceFieldError):
    """The requested level does not occur in the grid field."""


class InvalidTube(DistanceFieldError):
    """A sample violates the tube precondition of the level-set distance identity."""


class ScaleUnderflow(DistanceFieldError):
    """No admissible probe scale remains (below 1e-12 or inside a truncation zone)."""


class NotC1InNeighborhood(DistanceFieldError):
    """The boundary has a corner inside the requested neighborhood."""


class MedialInBall(DistanceFieldError):
    """A sampled point in the test ball lies on the medial axis."""


class PreconditionViolated(DistanceFieldError):
    """Sampling could not satisfy the operation's preconditions."""


class StartNotInDomain(DistanceFieldError):
    """A characteristic trace must start inside the open domain."""


class StartOnMedialAxis(DistanceFieldError):
    """A characteristic trace cannot start where the gradient is undefined."""


class TooFewSamples(DistanceFieldError):
    """A path must carry at least three samples to be verified."""
