"""The standard simplex, its distinguished cell, and the log-map isometry.

The open standard n-simplex (positive coordinates summing to 1 in R^{n+1})
carries a Hilbert metric isometric to a normed vector space: the centered
coordinate-wise logarithm sends it onto the sum-zero hyperplane W_n, where
the variation seminorm (max - min)/2 restricted to W_n is a genuine norm
matching the Hilbert distance.  That identity is not taken on faith; the
test suite checks it against the cross-ratio route on random pairs.

Metric computations on the simplex are routed through a full-dimensional
chart (drop the last coordinate), which is legitimate because the Hilbert
distance is an affine invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateInput
from .metric import HilbertStructure, distance
from .polytope import Polytope, build_polytope


@dataclass(frozen=True)
class SimplexPoint:
    """Interior point of the standard simplex: positive coords, sum 1."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.ndim != 1 or c.size < 2:
            raise DegenerateInput("simplex point needs at least 2 coordinates")
        if not np.all(c > 0.0):
            raise DegenerateInput("simplex point coordinates must be strictly positive")
        if abs(c.sum() - 1.0) > 1e-12:
            raise DegenerateInput(f"simplex point coordinates sum to {c.sum()!r}, not 1")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    @property
    def dim(self) -> int:
        return self.coords.size - 1


@dataclass(frozen=True)
class WPoint:
    """Point of the hyperplane W_n = {x in R^{n+1} : sum x_i = 0}."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if abs(c.sum()) > 1e-10:
            raise DegenerateInput(f"W_n coordinates sum to {c.sum()!r}, not 0")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    def __sub__(self, other: "WPoint") -> "WPoint":
        return WPoint(self.coords - other.coords)

    def __add__(self, other: "WPoint") -> "WPoint":
        return WPoint(self.coords + other.coords)


@dataclass(frozen=True)
class StandardCell:
    """The cell of the standard simplex spanned by the nested-face barycenters.

    Vertex k averages the first k+1 unit vectors: 1/(k+1) repeated k+1
    times, then zeros.
    """

    dimension: int
    vertices: np.ndarray


@dataclass(frozen=True)
class StandardCone:
    """Image of the standard cell under the log map: a simplicial cone in W_n.

    Generator k is n-k repeated k+1 times followed by -(k+1) repeated n-k
    times, for k = 0..n-1.
    """

    dimension: int
    generators: np.ndarray

    def solve_coefficients(self, X: np.ndarray) -> np.ndarray:
        """Coordinates of X in the generator basis of W_n (least squares)."""
        return _cone_pinv(self.dimension) @ np.asarray(X, dtype=float)


def standard_cell(n: int) -> StandardCell:
    if n < 1:
        raise DegenerateInput("cell dimension must be >= 1")
    V = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        V[k, : k + 1] = 1.0 / (k + 1)
    return StandardCell(n, V)


def standard_cone(n: int) -> StandardCone:
    if n < 1:
        raise DegenerateInput("cone dimension must be >= 1")
    G = np.zeros((n, n + 1))
    for k in range(n):
        G[k, : k + 1] = float(n - k)
        G[k, k + 1:] = -float(k + 1)
    return StandardCone(n, G)


@lru_cache(maxsize=None)
def _cone_pinv(n: int) -> np.ndarray:
    return np.linalg.pinv(standard_cone(n).generators.T)


def phi(x: SimplexPoint) -> WPoint:
    """Centered log map: X_i = ln(x_i) minus the mean of the ln(x_j)."""
    return WPoint(_phi(x.coords))


def _phi(coords: np.ndarray) -> np.ndarray:
    logs = np.log(coords)
    return logs - logs.mean(axis=-1, keepdims=True)


def phi_inv(X: WPoint) -> SimplexPoint:
    """Inverse of the log map (normalized exponential)."""
    return SimplexPoint(_phi_inv(X.coords))


def _phi_inv(coords: np.ndarray) -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    if np.max(coords) > 700.0:
        raise OverflowError("log-space coordinate exceeds 700; point is degenerate")
    shifted = coords - coords.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def dlh_norm(Z) -> float:
    """Polyhedral norm on W_n: half the coordinate spread (max - min)."""
    c = Z.coords if isinstance(Z, WPoint) else np.asarray(Z, dtype=float)
    return float(0.5 * (c.max(axis=-1) - c.min(axis=-1)))


def cone_membership(C: StandardCone, X, tol: float = 1e-9) -> tuple[bool, np.ndarray]:
    """Express X in cone generators; inside iff every coefficient >= -tol."""
    coords = X.coords if isinstance(X, WPoint) else np.asarray(X, dtype=float)
    a = C.solve_coefficients(coords)
    return bool(np.all(a >= -tol)), a


# --- full-dimensional chart -------------------------------------------------

@lru_cache(maxsize=None)
def chart_polytope(n: int) -> Polytope:
    """The standard simplex as a full-dimensional polytope in R^n.

    Chart: drop the last coordinate; vertices are the origin plus the unit
    vectors.
    """
    pts = np.vstack([np.zeros(n), np.eye(n)])
    return build_polytope(pts)


@lru_cache(maxsize=None)
def chart_structure(n: int) -> HilbertStructure:
    return HilbertStructure(chart_polytope(n))


@lru_cache(maxsize=None)
def cell_chart_polytope(n: int) -> Polytope:
    """Chart image of the standard cell (for sampling its interior)."""
    return build_polytope(standard_cell(n).vertices[:, :-1])


def to_chart(coords: np.ndarray) -> np.ndarray:
    """Drop the last simplex coordinate."""
    return np.asarray(coords, dtype=float)[..., :-1]


def from_chart(u: np.ndarray) -> np.ndarray:
    """Recover full simplex coordinates from chart coordinates."""
    u = np.asarray(u, dtype=float)
    last = 1.0 - u.sum(axis=-1, keepdims=True)
    return np.concatenate([u, last], axis=-1)


def simplex_distance(x: SimplexPoint, y: SimplexPoint) -> float:
    """Hilbert distance of the standard simplex, via the chart polytope."""
    if x.dim != y.dim:
        raise DegenerateInput("points live on simplices of different dimension")
    H = chart_structure(x.dim)
    return distance(H, to_chart(x.coords), to_chart(y.coords))
