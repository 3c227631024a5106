"""Exception hierarchy.

Two families matter operationally: ``InvalidInput`` covers precondition and
validation failures (CLI exit code 1, HTTP 400), ``NumericFailure`` covers
breakdowns of the numerics themselves (CLI exit code 2, HTTP 500).
"""


class HilbertGeometryError(Exception):
    """Base class for all package errors."""


class InvalidInput(HilbertGeometryError):
    """Input violates a documented precondition."""


class NumericFailure(HilbertGeometryError):
    """A computation that should succeed on valid input broke down."""


# --- validation family ---

class DegenerateInput(InvalidInput):
    """Non-finite coordinates or malformed point data."""


class NotFullDimensional(InvalidInput):
    """Vertex set does not affinely span the ambient space."""


class HalfspaceMismatch(InvalidInput):
    """Declared halfspaces disagree with the computed facets."""


class PointNotInterior(InvalidInput):
    """Point is outside or too close to the boundary."""


class ZeroDirection(InvalidInput):
    """Direction vector is (numerically) zero."""


class NotCollinear(InvalidInput):
    """Cross-ratio arguments do not lie on a common line."""


class BadOrdering(InvalidInput):
    """Cross-ratio arguments are not strictly ordered along their line."""


class PointAtInfinity(InvalidInput):
    """Projective image leaves the affine patch."""


class HypothesisViolated(InvalidInput):
    """Nested-simplex triple fails the inclusion or shared-face hypotheses."""


# --- numeric family ---

class DegenerateCell(NumericFailure):
    """A subdivision cell has affinely dependent vertices."""


class SingularChart(NumericFailure):
    """A chart correspondence system is numerically singular."""


class LocationFailure(NumericFailure):
    """No subdivision cell contains the query point (tiling bug)."""


class ConeLocationFailure(NumericFailure):
    """No cell cone contains the query point (tiling bug)."""


class SamplingExhausted(NumericFailure):
    """Rejection sampling acceptance rate collapsed."""
