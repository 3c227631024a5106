"""Empirical estimators for the constants of the flattening theorem.

The underlying results are existence statements (a global bi-Lipschitz
constant L, per-cell constants k_i, a nested-simplex constant M, and
boundedness of the Finsler ratio Q); none comes with a numeric value.
Each estimator therefore reports the observed ratio range plus a
stability diagnostic (headline at half sample vs full sample) instead of
pretending at a bound.  Suprema live near the boundary, so a fixed 20%
of every budget is spent on points bisected to small facet slack; stress
points are interleaved (every 5th sample) to keep the two halves of the
stability comparison balanced.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, HypothesisViolated, SamplingExhausted
from .flatten import build_atlas, flatten_many
from .metric import HilbertStructure, distance_many, finsler_many
from .polytope import Polytope, Region, build_polytope, contains, face_lattice
from .sampling import (
    SampleConfig,
    _uniform_interior,
    _unit_directions,
    facet_stress_points,
    stress_points,
)
from .simplex import chart_polytope, chart_structure
from .tolerances import EPS_GEOM, EPS_INT

STRESS_MARGINS = np.array([1e-2, 1e-3, 1e-4])
_SKIP_DISTANCE = 1e-9  # pairs closer than this carry no ratio information


@dataclass(frozen=True)
class RatioReport:
    """Observed range of a positive ratio over a seeded sample.

    stability is the headline statistic at the full sample divided by the
    same statistic over the first half; it is >= 1 by construction and
    values near 1 indicate the estimate has stopped growing.
    """

    min_ratio: float
    max_ratio: float
    histogram: dict
    sample_count: int
    skipped: int
    stability: float

    @property
    def headline(self) -> float:
        """Symmetric distortion estimate max(max_ratio, 1/min_ratio)."""
        return max(self.max_ratio, 1.0 / self.min_ratio)

    def to_dict(self) -> dict:
        return {
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "headline": self.headline,
            "histogram": self.histogram,
            "sample_count": self.sample_count,
            "skipped": self.skipped,
            "stability": self.stability,
        }


def _headline(values: np.ndarray) -> float:
    return float(max(values.max(), 1.0 / values.min()))


def _make_report(values: np.ndarray, skipped: int) -> RatioReport:
    """Histogram + stability summary of recorded ratios, in stream order."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise SamplingExhausted("no usable samples survived skipping")
    counts, edges = np.histogram(values, bins=20)
    half = values[: max(1, values.size // 2)]
    return RatioReport(
        min_ratio=float(values.min()),
        max_ratio=float(values.max()),
        histogram={"bin_edges": edges.tolist(), "counts": counts.tolist()},
        sample_count=int(values.size),
        skipped=int(skipped),
        stability=_headline(values) / _headline(half),
    )


def _stress_cycle(size: int) -> np.ndarray:
    return STRESS_MARGINS[np.arange(size) % len(STRESS_MARGINS)]


def estimate_bilipschitz(P: Polytope, cfg: SampleConfig) -> RatioReport:
    """Observed range of d_P(x, y) / ||F(x) - F(y)|| over seeded pairs.

    Every 5th pair has x pushed to small facet slack (margins cycling
    through STRESS_MARGINS); every 10th pair has both endpoints pushed.
    Pairs with d_P <= 1e-9 are skipped.
    """
    atlas = build_atlas(P)
    H = HilbertStructure(P)
    rng_x, rng_y, rng_s = cfg.spawn(3)
    count = cfg.count
    X = _uniform_interior(P, count, cfg.interior_margin, rng_x)
    Y = _uniform_interior(P, count, cfg.interior_margin, rng_y)
    sx = np.arange(4, count, 5)
    if sx.size:
        X[sx] = stress_points(P, sx.size, _stress_cycle(sx.size), rng_s)
    sy = np.arange(9, count, 10)
    if sy.size:
        Y[sy] = stress_points(P, sy.size, _stress_cycle(sy.size), rng_s)
    d = distance_many(H, X, Y)
    e = np.linalg.norm(flatten_many(atlas, X) - flatten_many(atlas, Y), axis=1)
    keep = d > _SKIP_DISTANCE
    with np.errstate(divide="ignore"):
        ratios = d[keep] / e[keep]
    return _make_report(ratios, int(count - keep.sum()))


def estimate_cell_constants(P: Polytope, cfg: SampleConfig) -> list[RatioReport]:
    """Per-cell range of F_simplex(x, v) / F_image(x, v) on the open simplex.

    The image polytope of cell i is the whole polytope pushed through that
    cell's chart; both Finsler norms are evaluated in the drop-last
    coordinate chart of the simplex hyperplane.  Samples falling outside
    an image polytope's interior are skipped for that cell.
    """
    atlas = build_atlas(P)
    n = P.dimension
    U = chart_polytope(n)
    H_U = chart_structure(n)
    rng_x, rng_v, rng_s = cfg.spawn(3)
    count = cfg.count
    X = _uniform_interior(U, count, cfg.interior_margin, rng_x)
    sx = np.arange(4, count, 5)
    if sx.size:
        X[sx] = stress_points(U, sx.size, _stress_cycle(sx.size), rng_s)
    V = _unit_directions(count, n, rng_v)
    num = finsler_many(H_U, X, V)

    reports = []
    for i in range(atlas.n_cells):
        image = atlas.charts[i].apply(P.vertices)
        Qi = build_polytope(image[:, :-1])
        mask = Qi.slacks(X).min(axis=1) > EPS_INT
        den = finsler_many(HilbertStructure(Qi), X[mask], V[mask])
        reports.append(_make_report(num[mask] / den, int(count - mask.sum())))
    return reports


def _aff_hull_gap(points: np.ndarray, hull_pts: np.ndarray) -> float:
    """Largest distance from the points to the affine hull of hull_pts."""
    R = (points - hull_pts[0]).T
    D = (hull_pts[1:] - hull_pts[0]).T
    if D.size:
        sol, *_ = np.linalg.lstsq(D, R, rcond=None)
        R = R - D @ sol
    return float(np.linalg.norm(R, axis=0).max())


def _face_points(P: Polytope, face) -> np.ndarray:
    return P.vertices[sorted(face.vertex_ids)]


def verify_nested_triple(S: Polytope, C1: Polytope, C2: Polytope) -> int:
    """Check the nested-simplex hypotheses; return S's shared facet id.

    Requires S, C1, C2 to be n-simplices with S inside C1 inside C2 such
    that for every k < n exactly one k-face of S lies inside a k-face of
    both C1 and C2, and those faces form a single flag of S (a shared
    facet hyperplane chain down to a common vertex).
    """
    n = S.dimension
    for name, T in (("S", S), ("C1", C1), ("C2", C2)):
        if T.dimension != n:
            raise HypothesisViolated(f"{name} has dimension {T.dimension}, expected {n}")
        if T.n_vertices != n + 1:
            raise HypothesisViolated(f"{name} is not a simplex ({T.n_vertices} vertices)")
    for iname, inner, oname, outer in (("S", S, "C1", C1), ("C1", C1, "C2", C2)):
        for v in inner.vertices:
            if contains(outer, v) == Region.OUTSIDE:
                raise HypothesisViolated(
                    f"vertex {v.tolist()} of {iname} lies outside {oname}")

    lat_S, lat_1, lat_2 = face_lattice(S), face_lattice(C1), face_lattice(C2)
    chain = []
    for k in range(n):
        hits = []
        for f in lat_S.faces[k]:
            pts = _face_points(S, f)
            in_1 = any(_aff_hull_gap(pts, _face_points(C1, g)) <= EPS_GEOM
                       for g in lat_1.faces[k])
            in_2 = any(_aff_hull_gap(pts, _face_points(C2, g)) <= EPS_GEOM
                       for g in lat_2.faces[k])
            if in_1 and in_2:
                hits.append(f)
        if len(hits) != 1:
            raise HypothesisViolated(
                f"{len(hits)} shared {k}-faces, hypothesis requires exactly 1")
        chain.append(hits[0])
    for a, b in zip(chain, chain[1:]):
        if not a.vertex_ids < b.vertex_ids:
            raise HypothesisViolated("shared faces do not form a flag")
    (facet_id,) = chain[-1].active_facets
    return int(facet_id)


def nested_ratio_experiment(S: Polytope, C1: Polytope, C2: Polytope,
                            cfg: SampleConfig) -> RatioReport:
    """Observed range of Q(x, v) = F_C1(x, v) / F_C2(x, v) over interior(S).

    Every 5th point is placed at small slack against the shared facet
    (margins cycling through STRESS_MARGINS), probing the hard regime
    where the chord leaves through the common boundary.
    """
    shared_facet = verify_nested_triple(S, C1, C2)
    rng_x, rng_v, rng_s = cfg.spawn(3)
    count = cfg.count
    X = _uniform_interior(S, count, cfg.interior_margin, rng_x)
    sx = np.arange(4, count, 5)
    if sx.size:
        X[sx] = facet_stress_points(S, shared_facet, sx.size, _stress_cycle(sx.size), rng_s)
    V = _unit_directions(count, S.dimension, rng_v)
    ok = (C1.slacks(X).min(axis=1) > EPS_INT) & (C2.slacks(X).min(axis=1) > EPS_INT)
    ratios = (finsler_many(HilbertStructure(C1), X[ok], V[ok])
              / finsler_many(HilbertStructure(C2), X[ok], V[ok]))
    return _make_report(ratios, int(count - ok.sum()))


def isometry_check(n: int, cfg: SampleConfig) -> float:
    """Max |d_simplex(x, y) - dlh_norm(phi(x) - phi(y))| over seeded pairs.

    The two routes are numerically independent: the left side is a
    cross-ratio of ray exit times in the drop-last chart, the right a
    centered-log image.  Dimensions above 4 are rejected (sampling the
    corner simplex by rejection degrades combinatorially).
    """
    if not 1 <= n <= 4:
        raise DegenerateInput("isometry check supports dimensions 1 through 4")
    U = chart_polytope(n)
    H_U = chart_structure(n)
    rng_x, rng_y, rng_s = cfg.spawn(3)
    count = cfg.count
    X = _uniform_interior(U, count, cfg.interior_margin, rng_x)
    Y = _uniform_interior(U, count, cfg.interior_margin, rng_y)
    sx = np.arange(4, count, 5)
    if sx.size:
        X[sx] = stress_points(U, sx.size, _stress_cycle(sx.size), rng_s)
    d_chart = distance_many(H_U, X, Y)

    def centered_log(A: np.ndarray) -> np.ndarray:
        S = np.hstack([A, 1.0 - A.sum(axis=1, keepdims=True)])
        L = np.log(S)
        return L - L.mean(axis=1, keepdims=True)

    Z = centered_log(X) - centered_log(Y)
    d_log = 0.5 * (Z.max(axis=1) - Z.min(axis=1))
    return float(np.abs(d_chart - d_log).max())


def emit_grid(P: Polytope, resolution: int) -> list[str]:
    """CSV rows mapping a 2-D interior grid through the flattening map.

    First row is the header; the first data row is the polytope
    barycenter (the map's zero).  Grid nodes on or outside the boundary
    are dropped.
    """
    if P.dimension != 2:
        raise DegenerateInput("grid emission requires a 2-D polytope")
    resolution = int(resolution)
    if resolution < 0:
        raise DegenerateInput("resolution must be >= 0")
    rows = ["x0,x1,F0,F1"]
    if resolution == 0:
        return rows
    atlas = build_atlas(P)
    lo, hi = P.bounding_box()
    axes = [np.linspace(lo[i], hi[i], resolution) for i in range(2)]
    grid = np.array(np.meshgrid(*axes, indexing="ij")).reshape(2, -1).T
    grid = grid[P.slacks(grid).min(axis=1) > EPS_INT]
    pts = np.vstack([P.barycenter()[None, :], grid])
    img = flatten_many(atlas, pts)
    for (x0, x1), (f0, f1) in zip(pts, img):
        rows.append(f"{x0:.17g},{x1:.17g},{f0:.17g},{f1:.17g}")
    return rows
