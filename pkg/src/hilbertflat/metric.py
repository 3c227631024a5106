"""Hilbert distance and Finsler norm of a convex polytope.

The distance between interior points p, q is half the log of the cross
ratio of (a, p, q, b), where a and b are the chord endpoints through p and
q, labeled so that a sits on the q->p side.  This keeps the cross ratio
above 1 and the logarithm positive.  Both quantities are projective
invariants; `ProjectiveMap` supports testing that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadOrdering, DegenerateInput, NotCollinear, PointAtInfinity, PointNotInterior
from .polytope import Polytope, ray_exit
from .tolerances import EPS_GEOM, EPS_INT


@dataclass(frozen=True)
class HilbertStructure:
    """Distance and Finsler-norm evaluator for one polytope."""

    polytope: Polytope

    def distance(self, p, q) -> float:
        return distance(self, p, q)

    def finsler_norm(self, p, v) -> float:
        return finsler_norm(self, p, v)


def cross_ratio(a, p, q, b) -> float:
    """Cross ratio [a, p, q, b] = (|q-a|/|p-a|) * (|p-b|/|q-b|).

    The four points must be collinear within EPS_GEOM and strictly ordered
    a, p, q, b along their line; the result is then > 1.
    """
    a, p, q, b = (np.asarray(x, dtype=float) for x in (a, p, q, b))
    d = b - a
    length = np.linalg.norm(d)
    if length <= EPS_GEOM:
        raise BadOrdering("endpoints a and b coincide")
    u = d / length
    for label, x in (("p", p), ("q", q)):
        off = x - a
        resid = np.linalg.norm(off - np.dot(off, u) * u)
        if resid > EPS_GEOM * max(1.0, length):
            raise NotCollinear(f"point {label} is off the line by {resid:.3e}")
    tp = float(np.dot(p - a, u))
    tq = float(np.dot(q - a, u))
    if not (EPS_GEOM < tp < tq and tq < length - EPS_GEOM):
        raise BadOrdering("points are not strictly ordered a, p, q, b")
    return (np.linalg.norm(q - a) / np.linalg.norm(p - a)) \
        * (np.linalg.norm(p - b) / np.linalg.norm(q - b))


def _require_interior(P: Polytope, x: np.ndarray, who: str):
    if float(P.min_slack(x)) <= EPS_INT:
        raise PointNotInterior(f"{who} has facet slack <= {EPS_INT}")


def distance(H: HilbertStructure, p, q) -> float:
    """Hilbert distance between two interior points."""
    P = H.polytope
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    _require_interior(P, p, "p")
    _require_interior(P, q, "q")
    gap = np.linalg.norm(q - p)
    if gap <= EPS_GEOM:
        return 0.0
    u = (q - p) / gap
    _, b_pt, _ = ray_exit(P, q, u)
    _, a_pt, _ = ray_exit(P, p, -u)
    return 0.5 * math.log(cross_ratio(a_pt, p, q, b_pt))


def finsler_norm(H: HilbertStructure, p, v) -> float:
    """Finsler norm F(p, v) = |v|/2 * (1/|p - p^-| + 1/|p - p^+|)."""
    P = H.polytope
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    _require_interior(P, p, "p")
    speed = float(np.linalg.norm(v))
    if speed == 0.0:
        return 0.0
    u = v / speed
    t_plus, _, _ = ray_exit(P, p, u)
    t_minus, _, _ = ray_exit(P, p, -u)
    return 0.5 * speed * (1.0 / t_plus + 1.0 / t_minus)


# --- vectorized kernels (same arithmetic, batched over rows) ---------------

def _exit_times(P: Polytope, X: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Exit parameter of each row ray X[i] + t*U[i]; rows must be interior."""
    slacks = P.slacks(X)                      # (N, F)
    denom = U @ P._normals.T                  # (N, F)
    mask = denom > 0.0
    t = np.where(mask, slacks / np.where(mask, denom, 1.0), np.inf)
    return t.min(axis=1)


def distance_many(H: HilbertStructure, P_pts, Q_pts) -> np.ndarray:
    """Row-wise Hilbert distance between interior point arrays (N, n)."""
    P = H.polytope
    X = np.asarray(P_pts, dtype=float)
    Y = np.asarray(Q_pts, dtype=float)
    if np.min(P.min_slack(X)) <= EPS_INT or np.min(P.min_slack(Y)) <= EPS_INT:
        raise PointNotInterior("batch contains a point too close to the boundary")
    gap = np.linalg.norm(Y - X, axis=1)
    out = np.zeros(len(X))
    live = gap > EPS_GEOM
    if live.any():
        U = (Y[live] - X[live]) / gap[live, None]
        tb = _exit_times(P, Y[live], U)
        ta = _exit_times(P, X[live], -U)
        # chord endpoints are at distance ta beyond p and tb beyond q
        ratio = ((gap[live] + ta) / ta) * ((gap[live] + tb) / tb)
        out[live] = 0.5 * np.log(ratio)
    return out


def finsler_many(H: HilbertStructure, X_pts, V_dirs) -> np.ndarray:
    """Row-wise Finsler norm for interior points and arbitrary vectors."""
    P = H.polytope
    X = np.asarray(X_pts, dtype=float)
    V = np.asarray(V_dirs, dtype=float)
    if np.min(P.min_slack(X)) <= EPS_INT:
        raise PointNotInterior("batch contains a point too close to the boundary")
    speed = np.linalg.norm(V, axis=1)
    out = np.zeros(len(X))
    live = speed > 0.0
    if live.any():
        U = V[live] / speed[live, None]
        tp = _exit_times(P, X[live], U)
        tm = _exit_times(P, X[live], -U)
        out[live] = 0.5 * speed[live] * (1.0 / tp + 1.0 / tm)
    return out


@dataclass(frozen=True)
class ProjectiveMap:
    """Projective transformation given by an (n+1)x(n+1) homogeneous matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DegenerateInput("projective matrix must be square")
        if abs(np.linalg.det(m)) <= EPS_GEOM:
            raise DegenerateInput("projective matrix is numerically singular")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


def apply_projective(T: ProjectiveMap, x) -> np.ndarray:
    """Image of one point (n,) or a batch (N, n), via homogeneous coordinates."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    H = np.hstack([X, np.ones((len(X), 1))]) @ T.matrix.T
    w = H[:, -1]
    if np.min(np.abs(w)) <= EPS_GEOM:
        raise PointAtInfinity("image has vanishing homogeneous coordinate")
    out = H[:, :-1] / w[:, None]
    return out[0] if single else out
