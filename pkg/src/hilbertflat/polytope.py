"""Convex polytopes with dual (vertex + halfspace) representation.

Polytopes are built from vertex lists by brute-force facet enumeration,
which is tractable and dependency-free at the target scale (<= ~40
vertices, dimension <= ~6).  All enumerations (vertices, facets, faces,
flags) are sorted lexicographically so every derived structure is
reproducible bit for bit.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    DegenerateInput,
    HalfspaceMismatch,
    NotFullDimensional,
    NumericFailure,
    PointNotInterior,
    SingularChart,
    ZeroDirection,
)
from .tolerances import EPS_GEOM, EPS_INT


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Halfspace:
    """The set {x : normal . x <= offset} with a unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        norm = float(np.linalg.norm(n))
        if norm <= EPS_GEOM:
            raise DegenerateInput("halfspace normal is numerically zero")
        object.__setattr__(self, "normal", _readonly(n / norm))
        object.__setattr__(self, "offset", float(self.offset) / norm)

    def slack(self, x: np.ndarray) -> float:
        """Signed distance to the hyperplane, positive inside."""
        return self.offset - float(np.dot(self.normal, x))


@dataclass(frozen=True)
class Face:
    """A face of the polytope, identified by its vertex set."""

    dim: int
    vertex_ids: frozenset[int]
    active_facets: frozenset[int]


@dataclass(frozen=True)
class Flag:
    """A maximal chain of proper faces, one per dimension 0..n-1.

    ``chain[k]`` indexes into ``FaceLattice.faces[k]``.
    """

    chain: tuple[int, ...]


class FaceLattice:
    """All faces of a polytope grouped by dimension, with cover relations."""

    def __init__(self, faces: list[list[Face]], covers: dict[tuple[int, int], tuple[int, ...]]):
        self.faces = faces
        self.covers = covers

    @property
    def dimension(self) -> int:
        return len(self.faces) - 1

    def f_vector(self) -> tuple[int, ...]:
        """Face counts by dimension, whole polytope included."""
        return tuple(len(layer) for layer in self.faces)


class Region(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class Polytope:
    """Full-dimensional bounded convex polytope in R^n.

    Instances are immutable after construction; use :func:`build_polytope`.
    """

    def __init__(self, dimension: int, vertices: np.ndarray, facets: list[Halfspace],
                 incidence: list[frozenset[int]]):
        self.dimension = dimension
        self.vertices = _readonly(vertices)
        self.facets = tuple(facets)
        self.incidence = tuple(incidence)
        # stacked facet data for vectorized slack computations
        self._normals = _readonly(np.array([h.normal for h in facets]))
        self._offsets = _readonly(np.array([h.offset for h in facets]))

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_facets(self) -> int:
        return len(self.facets)

    def slacks(self, x: np.ndarray) -> np.ndarray:
        """Per-facet slack of one point (shape (F,)) or many ((N, F))."""
        x = np.asarray(x, dtype=float)
        return self._offsets - x @ self._normals.T

    def min_slack(self, x: np.ndarray) -> np.ndarray | float:
        s = self.slacks(x)
        return s.min(axis=-1)

    def barycenter(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "vertices": [[float(c) for c in v] for v in self.vertices],
            "halfspaces": [
                {"normal": [float(c) for c in h.normal], "offset": float(h.offset)}
                for h in self.facets
            ],
        }


def _affine_rank(points: np.ndarray, tol: float = 1e-8) -> int:
    if points.shape[0] <= 1:
        return 0
    diffs = points[1:] - points[0]
    s = np.linalg.svd(diffs, compute_uv=False)
    if s.size == 0:
        return 0
    return int(np.sum(s > tol * max(1.0, s[0])))


def _hyperplane_through(points: np.ndarray) -> tuple[np.ndarray, float] | None:
    """Unit normal and offset of the unique hyperplane through n points.

    Returns None when the points do not span a hyperplane (rank deficiency).
    """
    n = points.shape[1]
    diffs = points[1:] - points[0]
    u, s, vh = np.linalg.svd(diffs)
    rank = int(np.sum(s > 1e-10 * max(1.0, s[0] if s.size else 1.0)))
    if rank != n - 1:
        return None
    normal = vh[-1]
    return normal, float(np.dot(normal, points[0]))


def build_polytope(vertices) -> Polytope:
    """Build a full-dimensional polytope from a list of points.

    Facets are enumerated brute-force over all n-subsets of the input
    spanning a hyperplane that supports the whole set.  Input points that
    are not extreme (hull interior, or relative interior of a face) are
    discarded; duplicates within EPS_GEOM are merged.
    """
    pts = np.asarray(vertices, dtype=float)
    if pts.ndim != 2 or pts.dtype == object:
        raise DegenerateInput("vertices must be a rectangular array of coordinates")
    if not np.all(np.isfinite(pts)):
        raise DegenerateInput("non-finite vertex coordinates")
    n = pts.shape[1]
    if n < 1:
        raise DegenerateInput("ambient dimension must be >= 1")

    # deduplicate (keep first occurrence)
    kept: list[np.ndarray] = []
    for p in pts:
        if not any(np.linalg.norm(p - q) <= EPS_GEOM for q in kept):
            kept.append(p)
    pts = np.array(kept)
    if pts.shape[0] < n + 1:
        raise NotFullDimensional(f"need at least {n + 1} distinct points in dimension {n}")
    if _affine_rank(pts) < n:
        raise NotFullDimensional("vertex set is not full-dimensional")

    # candidate facets: supporting hyperplanes spanned by n input points
    hyperplanes: list[tuple[np.ndarray, float]] = []
    for subset in combinations(range(pts.shape[0]), n):
        hp = _hyperplane_through(pts[list(subset)])
        if hp is None:
            continue
        normal, offset = hp
        side = pts @ normal - offset
        if side.max() <= EPS_GEOM:
            pass
        elif side.min() >= -EPS_GEOM:
            normal, offset = -normal, -offset
        else:
            continue
        if not any(np.linalg.norm(normal - m) <= EPS_GEOM and abs(offset - b) <= EPS_GEOM
                   for m, b in hyperplanes):
            hyperplanes.append((normal, offset))

    # keep only extreme points: active facet normals must span R^n
    normals = np.array([h[0] for h in hyperplanes])
    offsets = np.array([h[1] for h in hyperplanes])
    extreme = []
    for p in pts:
        active = np.abs(normals @ p - offsets) <= EPS_GEOM
        if active.sum() >= n and np.linalg.matrix_rank(normals[active], tol=1e-8) == n:
            extreme.append(p)
    verts = np.array(sorted(extreme, key=tuple))
    if verts.shape[0] < n + 1 or _affine_rank(verts) < n:
        raise NotFullDimensional("extreme point set is not full-dimensional")

    order = sorted(range(len(hyperplanes)), key=lambda i: (*hyperplanes[i][0], hyperplanes[i][1]))
    facets = [Halfspace(hyperplanes[i][0], hyperplanes[i][1]) for i in order]

    incidence = []
    for h in facets:
        on = np.abs(verts @ h.normal - h.offset) <= EPS_GEOM
        ids = frozenset(int(i) for i in np.flatnonzero(on))
        if len(ids) < n or _affine_rank(verts[sorted(ids)]) < n - 1:
            raise NumericFailure("facet with too few independent incident vertices")
        incidence.append(ids)

    return Polytope(n, verts, facets, incidence)


def face_lattice(P: Polytope) -> FaceLattice:
    """Enumerate all faces as intersections of facet vertex sets.

    Every proper face of a polytope is the common vertex set of the facets
    containing it, so closing the facet vertex sets under pairwise
    intersection yields the full lattice.
    """
    n = P.dimension
    facet_sets = [frozenset(inc) for inc in P.incidence]
    closed: set[frozenset[int]] = set(facet_sets)
    frontier = set(facet_sets)
    while frontier:
        new = set()
        for s in frontier:
            for t in facet_sets:
                u = s & t
                if u and u not in closed:
                    new.add(u)
        closed |= new
        frontier = new

    by_dim: list[list[Face]] = [[] for _ in range(n + 1)]
    for vset in closed:
        d = _affine_rank(P.vertices[sorted(vset)])
        active = frozenset(i for i, fs in enumerate(facet_sets) if vset <= fs)
        by_dim[d].append(Face(d, vset, active))
    all_ids = frozenset(range(P.n_vertices))
    by_dim[n].append(Face(n, all_ids, frozenset()))

    for layer in by_dim:
        layer.sort(key=lambda f: tuple(sorted(f.vertex_ids)))

    covers: dict[tuple[int, int], tuple[int, ...]] = {}
    for k in range(n):
        for i, f in enumerate(by_dim[k]):
            parents = tuple(j for j, g in enumerate(by_dim[k + 1])
                            if f.vertex_ids < g.vertex_ids)
            covers[(k, i)] = parents
    return FaceLattice(by_dim, covers)


def enumerate_flags(lat: FaceLattice) -> list[Flag]:
    """All maximal chains f_0 < f_1 < ... < f_{n-1}, in lexicographic order."""
    n = lat.dimension
    flags: list[Flag] = []

    def extend(chain: tuple[int, ...], k: int):
        if k == n - 1:
            flags.append(Flag(chain))
            return
        for j in lat.covers[(k, chain[-1])]:
            extend(chain + (j,), k + 1)

    if n == 0:
        return flags
    for i in range(len(lat.faces[0])):
        if n == 1:
            flags.append(Flag((i,)))
        else:
            extend((i,), 0)
    return flags


def barycenter(face: Face, P: Polytope) -> np.ndarray:
    """Arithmetic mean of the face's vertices (not the volume centroid)."""
    return P.vertices[sorted(face.vertex_ids)].mean(axis=0)


def ray_exit(P: Polytope, p, v) -> tuple[float, np.ndarray, int]:
    """First boundary hit of the ray p + t*v, t > 0.

    Returns (t_plus, boundary point, facet index); the facet of lowest
    index wins on ties.  The exit parameter is in units of |v|.
    """
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.linalg.norm(v) <= EPS_GEOM:
        raise ZeroDirection("ray direction is numerically zero")
    slacks = P.slacks(p)
    if slacks.min() <= EPS_INT:
        raise PointNotInterior(f"ray origin has facet slack {slacks.min():.3e}")
    denom = P._normals @ v
    mask = denom > 0.0
    if not mask.any():
        raise NumericFailure("no facet ahead of the ray (polytope unbounded?)")
    t = np.where(mask, slacks / np.where(mask, denom, 1.0), np.inf)
    fid = int(np.argmin(t))
    t_plus = float(t[fid])
    return t_plus, p + t_plus * v, fid


def contains(P: Polytope, x, tol: float = EPS_GEOM) -> Region:
    """Classify a point against the polytope at the given slack tolerance."""
    m = float(P.min_slack(np.asarray(x, dtype=float)))
    if m > tol:
        return Region.INTERIOR
    if m >= -tol:
        return Region.BOUNDARY
    return Region.OUTSIDE


class AffineMap:
    """Affine map x -> matrix @ x + translation between R^n_in and R^n_out."""

    def __init__(self, matrix: np.ndarray, translation: np.ndarray, inverse: "AffineMap | None" = None):
        self.matrix = _readonly(np.atleast_2d(matrix))
        self.translation = _readonly(np.atleast_1d(translation))
        self.codomain_dim, self.domain_dim = self.matrix.shape
        if self.translation.shape != (self.codomain_dim,):
            raise DegenerateInput("translation length must match codomain dimension")
        self.inverse = inverse

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Apply to one point (n_in,) or a batch (N, n_in)."""
        x = np.asarray(x, dtype=float)
        return x @ self.matrix.T + self.translation

    @classmethod
    def from_points(cls, domain_pts, codomain_pts, with_inverse: bool = True,
                    residual_tol: float = 1e-10) -> "AffineMap":
        """Solve the affine map sending each domain point to its partner.

        Uses least squares, which is exact when the domain points affinely
        span their space; the fit residual is checked against residual_tol.
        The inverse is built from the reversed correspondence (restricted to
        the image's affine hull when dimensions differ).
        """
        X = np.asarray(domain_pts, dtype=float)
        Y = np.asarray(codomain_pts, dtype=float)
        ext = np.hstack([X, np.ones((X.shape[0], 1))])
        sol, *_ = np.linalg.lstsq(ext, Y, rcond=None)
        matrix = sol[:-1].T
        translation = sol[-1]
        fwd = cls(matrix, translation)
        resid = float(np.abs(fwd.apply(X) - Y).max())
        if resid > residual_tol:
            raise SingularChart(f"affine correspondence residual {resid:.3e}")
        if with_inverse:
            extY = np.hstack([Y, np.ones((Y.shape[0], 1))])
            soli, *_ = np.linalg.lstsq(extY, X, rcond=None)
            inv = cls(soli[:-1].T, soli[-1])
            rt = float(np.abs(inv.apply(fwd.apply(X)) - X).max())
            if rt > residual_tol:
                raise SingularChart(f"affine round-trip residual {rt:.3e}")
            fwd.inverse = inv
            inv.inverse = fwd
        return fwd


# --- JSON interchange -------------------------------------------------------

def polytope_from_dict(data: dict) -> Polytope:
    """Build and validate a polytope from its JSON dictionary form.

    Format: {"dimension": n, "vertices": [[...], ...]} with optional
    "halfspaces": [{"normal": [...], "offset": b}, ...].  Declared
    halfspaces must match the computed facets as a set within EPS_GEOM.
    """
    try:
        dim = int(data["dimension"])
        raw_vertices = data["vertices"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DegenerateInput(f"malformed polytope data: {exc}") from exc
    P = build_polytope(raw_vertices)
    if P.dimension != dim:
        raise DegenerateInput(f"declared dimension {dim} != coordinate length {P.dimension}")
    declared = data.get("halfspaces")
    if declared is not None:
        given = [Halfspace(np.asarray(h["normal"], dtype=float), float(h["offset"]))
                 for h in declared]
        if len(given) != P.n_facets:
            raise HalfspaceMismatch(
                f"declared {len(given)} halfspaces, computed {P.n_facets}")
        unmatched = list(P.facets)
        for g in given:
            hit = next((h for h in unmatched
                        if np.linalg.norm(g.normal - h.normal) <= EPS_GEOM
                        and abs(g.offset - h.offset) <= EPS_GEOM), None)
            if hit is None:
                raise HalfspaceMismatch(
                    f"declared halfspace {g.normal.tolist()} <= {g.offset} not a facet")
            unmatched.remove(hit)
    return P


def polytope_from_json(path: str) -> Polytope:
    with open(path, "r", encoding="utf-8") as fh:
        return polytope_from_dict(json.load(fh))
