"""Barycentric cell decomposition and the global flattening map.

Every flag of the face lattice spawns one cell: the simplex on the
barycenters of the flag's faces plus the polytope barycenter.  Per cell,
an affine chart identifies it with the standard cell of the standard
simplex; composing chart, log map and a linear cone map yields a global
map F from the polytope interior onto R^n.  F agrees across cells on
shared faces because matching barycenters map to matching standard-cell
vertices, so the map is well defined and invertible.

F is normalized so the polytope barycenter maps to the origin (the cone
maps are linear rather than translated to the barycenter); the codomain is
a fresh copy of R^n, so the constant offset carries no metric content.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConeLocationFailure,
    DegenerateCell,
    LocationFailure,
    PointNotInterior,
    SingularChart,
)
from .polytope import AffineMap, Flag, Polytope, barycenter, enumerate_flags, face_lattice
from .simplex import _phi, _phi_inv, standard_cell, standard_cone
from .tolerances import EPS_GEOM, EPS_INT, EPS_LOC

_MIN_STEP = 1e-12  # segment-walk progress floor at degenerate crossings


@dataclass(frozen=True)
class CellSimplex:
    """One cell of the barycentric subdivision.

    Row k of ``vertices`` is the barycenter of the flag's k-face; the last
    row is the polytope barycenter.  The facet spanned by the first n rows
    is the single cell facet on the polytope boundary.
    """

    id: int
    flag: Flag
    vertices: np.ndarray


@dataclass(frozen=True)
class CellCone:
    """Positive cone of a cell at the polytope barycenter."""

    apex: np.ndarray
    generators: np.ndarray  # row k = cell vertex k minus apex


class FlatteningAtlas:
    """Charts and cone maps realizing the flattening map and its inverse."""

    def __init__(self, polytope: Polytope, cells: list[CellSimplex],
                 charts: list[AffineMap], cone_maps: list[AffineMap]):
        self.polytope = polytope
        self.cells = cells
        self.charts = charts
        self.cone_maps = cone_maps
        self.cones = [CellCone(c.vertices[-1], c.vertices[:-1] - c.vertices[-1])
                      for c in cells]
        n = polytope.dimension
        # cached solves: barycentric coordinates and cone coefficients
        homog = np.array([np.vstack([c.vertices.T, np.ones(n + 1)]) for c in cells])
        self._bary_inv = np.linalg.inv(homog)
        self._cone_inv = np.linalg.inv(np.array([co.generators.T for co in self.cones]))

    @property
    def n_cells(self) -> int:
        return len(self.cells)


def decompose(P: Polytope) -> list[CellSimplex]:
    """One cell per flag, in flag enumeration order."""
    lat = face_lattice(P)
    flags = enumerate_flags(lat)
    p_n = barycenter(lat.faces[P.dimension][0], P)
    cells = []
    for i, flag in enumerate(flags):
        rows = [barycenter(lat.faces[k][flag.chain[k]], P) for k in range(P.dimension)]
        rows.append(p_n)
        V = np.array(rows)
        vol = np.linalg.det(V[:-1] - V[-1])
        if abs(vol) <= EPS_GEOM:
            raise DegenerateCell(f"flag {flag.chain} yields affinely dependent barycenters")
        cells.append(CellSimplex(i, flag, V))
    return cells


def build_atlas(P: Polytope) -> FlatteningAtlas:
    """Solve all cell charts and cone maps from vertex correspondences."""
    n = P.dimension
    cells = decompose(P)
    std_vertices = standard_cell(n).vertices
    G = standard_cone(n).generators  # rows are the standard cone generators

    charts = []
    cone_maps = []
    for cell in cells:
        charts.append(AffineMap.from_points(cell.vertices, std_vertices))
        W = cell.vertices[:-1] - cell.vertices[-1]  # rows are cell cone generators
        M_t, *_ = np.linalg.lstsq(G, W, rcond=None)
        M = AffineMap(M_t.T, np.zeros(n))
        M.inverse = AffineMap(np.linalg.solve(W, G).T, np.zeros(n + 1), inverse=M)
        resid = max(
            float(np.abs(M.apply(G) - W).max()),
            float(np.abs(M.inverse.apply(W) - G).max()),
        )
        if resid > 1e-10:
            raise SingularChart(f"cone map residual {resid:.3e} in cell {cell.id}")
        cone_maps.append(M)
    return FlatteningAtlas(P, cells, charts, cone_maps)


def _bary_coords(atlas: FlatteningAtlas, x: np.ndarray) -> np.ndarray:
    """Barycentric coordinates of one point in every cell, shape (K, n+1)."""
    h = np.append(x, 1.0)
    return atlas._bary_inv @ h


def locate(atlas: FlatteningAtlas, x) -> int:
    """Lowest-id cell whose barycentric coordinates are all >= -EPS_LOC."""
    x = np.asarray(x, dtype=float)
    if float(atlas.polytope.min_slack(x)) <= EPS_INT:
        raise PointNotInterior("locate requires an interior point")
    lam = _bary_coords(atlas, x)
    hits = np.flatnonzero(lam.min(axis=1) >= -EPS_LOC)
    if hits.size == 0:
        raise LocationFailure(f"no cell contains {x.tolist()}")
    return int(hits[0])


def flatten_in_cell(atlas: FlatteningAtlas, i: int, x) -> np.ndarray:
    """Evaluate the flattening map through one specific cell's chart.

    Diagnostic entry point; callers are responsible for x lying in cell i.
    """
    s = atlas.charts[i].apply(np.asarray(x, dtype=float))
    if s.min() <= 0.0:
        raise LocationFailure(f"point maps outside the open simplex through cell {i}")
    return atlas.cone_maps[i].apply(_phi(s))


def flatten(atlas: FlatteningAtlas, x) -> np.ndarray:
    """Global flattening map; the polytope barycenter goes to the origin."""
    x = np.asarray(x, dtype=float)
    if float(atlas.polytope.min_slack(x)) <= EPS_INT:
        raise PointNotInterior("flatten requires an interior point")
    return flatten_in_cell(atlas, locate(atlas, x), x)


def locate_cone(atlas: FlatteningAtlas, y) -> int:
    """Lowest-id cell whose cone contains y (nonnegative cone coefficients)."""
    y = np.asarray(y, dtype=float)
    coeffs = atlas._cone_inv @ y
    tol = max(EPS_LOC, EPS_LOC * float(np.abs(coeffs).max()))
    hits = np.flatnonzero(coeffs.min(axis=1) >= -tol)
    if hits.size == 0:
        raise ConeLocationFailure(f"no cell cone contains {y.tolist()}")
    return int(hits[0])


def unflatten(atlas: FlatteningAtlas, y) -> np.ndarray:
    """Inverse of the flattening map, defined on all of R^n."""
    y = np.asarray(y, dtype=float)
    i = locate_cone(atlas, y)
    X = atlas.cone_maps[i].inverse.apply(y)
    s = _phi_inv(X)
    return atlas.charts[i].inverse.apply(s)


def split_segment(atlas: FlatteningAtlas, p, q) -> list[tuple[np.ndarray, int]]:
    """Break [p, q] at cell walls.

    Returns [(p_1, c_1), ..., (p_M, c_{M-1})]: the open segment between
    consecutive points lies in the cell recorded at its left endpoint, and
    the final point repeats the last carrier.  Walks by exit-time
    computation against the current cell with a minimum step to guarantee
    termination at degenerate (corner-touching) crossings.
    """
    P = atlas.polytope
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    for label, z in (("p", p), ("q", q)):
        if float(P.min_slack(z)) <= EPS_INT:
            raise PointNotInterior(f"{label} is not interior")
    d = q - p
    if np.linalg.norm(d) <= EPS_GEOM:
        return [(p, locate(atlas, p))]

    dh = np.append(d, 0.0)
    mu = atlas._bary_inv @ dh          # barycentric velocity per cell
    points = [p]
    carriers: list[int] = []
    t = 0.0
    for _ in range(atlas.n_cells + 2):
        lam = _bary_coords(atlas, p + t * d)
        inside = np.flatnonzero(lam.min(axis=1) >= -EPS_LOC)
        if inside.size == 0:
            raise LocationFailure("segment point escaped all cells")
        # among containing cells, follow the one the segment stays in longest
        best_cell, best_exit = -1, -1.0
        for k in inside:
            lk = np.maximum(lam[k], 0.0)
            falling = mu[k] < -1e-15
            exit_k = float((lk[falling] / -mu[k][falling]).min()) if falling.any() else np.inf
            if exit_k > best_exit:
                best_cell, best_exit = int(k), exit_k
        t_next = min(1.0, t + max(best_exit, _MIN_STEP))
        points.append(p + t_next * d if t_next < 1.0 else q)
        carriers.append(best_cell)
        t = t_next
        if t >= 1.0:
            break
    else:
        raise LocationFailure("segment walk failed to terminate")

    # merge consecutive pieces carried by the same cell
    out_pts = [points[0]]
    out_cells = [carriers[0]]
    for pt, c in zip(points[1:-1], carriers[1:]):
        if c != out_cells[-1]:
            out_pts.append(pt)
            out_cells.append(c)
    out_pts.append(points[-1])
    return list(zip(out_pts, out_cells + [out_cells[-1]]))


# --- batched kernels --------------------------------------------------------

def locate_many(atlas: FlatteningAtlas, X: np.ndarray) -> np.ndarray:
    """Cell id per row of X; rows are assumed interior."""
    X = np.asarray(X, dtype=float)
    H = np.hstack([X, np.ones((len(X), 1))])
    ids = np.full(len(X), -1, dtype=int)
    pending = np.arange(len(X))
    for k in range(atlas.n_cells):
        if pending.size == 0:
            break
        lam = H[pending] @ atlas._bary_inv[k].T
        hit = lam.min(axis=1) >= -EPS_LOC
        ids[pending[hit]] = k
        pending = pending[~hit]
    if pending.size:
        raise LocationFailure(f"{pending.size} points escaped all cells")
    return ids


def flatten_many(atlas: FlatteningAtlas, X: np.ndarray) -> np.ndarray:
    """Vectorized flattening map over rows of X (interior points)."""
    X = np.asarray(X, dtype=float)
    if X.size and np.min(atlas.polytope.min_slack(X)) <= EPS_INT:
        raise PointNotInterior("batch contains a non-interior point")
    ids = locate_many(atlas, X)
    out = np.empty_like(X)
    for k in np.unique(ids):
        rows = ids == k
        s = atlas.charts[k].apply(X[rows])
        out[rows] = atlas.cone_maps[k].apply(_phi(s))
    return out


def unflatten_many(atlas: FlatteningAtlas, Y: np.ndarray) -> np.ndarray:
    """Vectorized inverse flattening over rows of Y (anywhere in R^n)."""
    Y = np.asarray(Y, dtype=float)
    ids = np.full(len(Y), -1, dtype=int)
    pending = np.arange(len(Y))
    for k in range(atlas.n_cells):
        if pending.size == 0:
            break
        a = Y[pending] @ atlas._cone_inv[k].T
        tol = np.maximum(EPS_LOC, EPS_LOC * np.abs(a).max(axis=1))
        hit = a.min(axis=1) >= -tol
        ids[pending[hit]] = k
        pending = pending[~hit]
    if pending.size:
        raise ConeLocationFailure(f"{pending.size} points escaped all cell cones")
    out = np.empty_like(Y)
    for k in np.unique(ids):
        rows = ids == k
        Xw = atlas.cone_maps[k].inverse.apply(Y[rows])
        out[rows] = atlas.charts[k].inverse.apply(_phi_inv(Xw))
    return out
