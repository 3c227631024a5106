"""Global numeric tolerances.

All geometry runs in double precision at desk scale (dimension <= ~4,
coordinates of order 1..20), so absolute tolerances are adequate.
"""

import os

# Geometric tolerance for hyperplane incidence, dedup and collinearity.
# Overridable through the HILBERT_EPS environment variable.
EPS_GEOM = float(os.environ.get("HILBERT_EPS", "1e-9"))

# Minimum facet slack for a point to count as strictly interior.  Metric
# quantities diverge at the boundary, so closer points are rejected.
EPS_INT = 1e-7

# Tolerance on barycentric / cone coefficients during point location.
EPS_LOC = 1e-9
