"""Hilbert geometry of convex polytopes and its bi-Lipschitz flattening.

The library computes Hilbert distances and Finsler norms on polytope
interiors, barycentrically subdivides a polytope into cells indexed by
flags of its face lattice, and assembles the piecewise log-affine map
that carries the Hilbert metric onto Euclidean space with bounded
distortion.  Estimators measure the distortion constants empirically.
"""

from .errors import (
    BadOrdering,
    ConeLocationFailure,
    DegenerateCell,
    DegenerateInput,
    HalfspaceMismatch,
    HilbertGeometryError,
    HypothesisViolated,
    InvalidInput,
    LocationFailure,
    NotCollinear,
    NotFullDimensional,
    NumericFailure,
    PointAtInfinity,
    PointNotInterior,
    SamplingExhausted,
    SingularChart,
    ZeroDirection,
)
from .estimators import (
    RatioReport,
    emit_grid,
    estimate_bilipschitz,
    estimate_cell_constants,
    isometry_check,
    nested_ratio_experiment,
    verify_nested_triple,
)
from .flatten import (
    CellCone,
    CellSimplex,
    FlatteningAtlas,
    build_atlas,
    decompose,
    flatten,
    flatten_in_cell,
    flatten_many,
    locate,
    locate_cone,
    locate_many,
    split_segment,
    unflatten,
    unflatten_many,
)
from .metric import (
    HilbertStructure,
    ProjectiveMap,
    apply_projective,
    cross_ratio,
    distance,
    distance_many,
    finsler_many,
    finsler_norm,
)
from .polytope import (
    AffineMap,
    Face,
    FaceLattice,
    Flag,
    Halfspace,
    Polytope,
    Region,
    barycenter,
    build_polytope,
    contains,
    enumerate_flags,
    face_lattice,
    polytope_from_dict,
    polytope_from_json,
    ray_exit,
)
from .sampling import SampleConfig, sample_interior
from .simplex import (
    SimplexPoint,
    StandardCell,
    StandardCone,
    WPoint,
    cone_membership,
    dlh_norm,
    phi,
    phi_inv,
    simplex_distance,
    standard_cell,
    standard_cone,
)
from .tolerances import EPS_GEOM, EPS_INT, EPS_LOC

__version__ = "0.1.0"
