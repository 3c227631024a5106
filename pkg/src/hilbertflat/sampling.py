"""Seeded interior samplers for the empirical constant estimators.

Uniform sampling is rejection from the bounding box onto the margin-shrunk
interior (itself convex, so acceptance is exactly uniform).  Stress
sampling pushes points to a prescribed facet slack by bisection along a
random ray, probing the near-boundary regime where Finsler norms blow up.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, SamplingExhausted
from .polytope import Polytope
from .tolerances import EPS_INT

_CHUNK = 4096
_MIN_ACCEPT_RATE = 1e-4
_RATE_CHECK_FLOOR = 50_000  # draws before the acceptance-rate guard can fire


@dataclass(frozen=True)
class SampleConfig:
    """Reproducible sampling request: seed, point count, interior margin."""

    seed: int
    count: int
    interior_margin: float = 1e-6

    def __post_init__(self):
        if self.count < 1:
            raise DegenerateInput("count must be >= 1")
        if self.interior_margin < EPS_INT:
            raise DegenerateInput(f"interior_margin must be >= {EPS_INT}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def spawn(self, n: int) -> list[np.random.Generator]:
        """Independent deterministic sub-streams for interleaved phases."""
        return [np.random.default_rng(s) for s in np.random.SeedSequence(self.seed).spawn(n)]


def _uniform_interior(P: Polytope, count: int, margin: float,
                      rng: np.random.Generator) -> np.ndarray:
    """Uniform points with min facet slack >= margin, shape (count, n)."""
    lo, hi = P.bounding_box()
    out = np.empty((count, P.dimension))
    have = 0
    draws = 0
    while have < count:
        X = rng.uniform(lo, hi, size=(_CHUNK, P.dimension))
        draws += _CHUNK
        keep = X[P.slacks(X).min(axis=1) >= margin]
        take = min(len(keep), count - have)
        out[have:have + take] = keep[:take]
        have += take
        if draws >= _RATE_CHECK_FLOOR and have / draws < _MIN_ACCEPT_RATE:
            raise SamplingExhausted(
                f"acceptance rate {have / draws:.2e} below {_MIN_ACCEPT_RATE:.0e} "
                f"at margin {margin:g}")
    return out


def sample_interior(P: Polytope, cfg: SampleConfig) -> list[np.ndarray]:
    """Deterministic uniform sample of the margin-shrunk interior."""
    pts = _uniform_interior(P, cfg.count, cfg.interior_margin, cfg.rng())
    return [pts[i] for i in range(cfg.count)]


def _unit_directions(count: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points on the unit sphere, shape (count, dim)."""
    V = rng.normal(size=(count, dim))
    norms = np.linalg.norm(V, axis=1, keepdims=True)
    # resample the measure-zero degenerate draws instead of dividing by ~0
    bad = np.flatnonzero(norms[:, 0] < 1e-12)
    while bad.size:
        V[bad] = rng.normal(size=(bad.size, dim))
        norms[bad] = np.linalg.norm(V[bad], axis=1, keepdims=True)
        bad = np.flatnonzero(norms[:, 0] < 1e-12)
    return V / norms


def _exit_points(P: Polytope, X: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Boundary points hit by rays X + t U, rowwise (interior X, unit U)."""
    S = P.slacks(X)
    D = U @ P._normals.T
    ahead = D > 0.0
    T = np.where(ahead, S / np.where(ahead, D, 1.0), np.inf)
    return X + T.min(axis=1)[:, None] * U


def stress_points(P: Polytope, count: int, margins: np.ndarray,
                  rng: np.random.Generator) -> np.ndarray:
    """Interior points bisected to min facet slack ~= margins, rowwise.

    Each point starts at a uniform interior draw, walks a random ray to the
    boundary, and bisects the segment until the minimum slack matches its
    target margin, landing within the margin of some facet.
    """
    margins = np.broadcast_to(np.asarray(margins, dtype=float), (count,))
    start_margin = max(1e-3, float(margins.max()) * 2.0)
    X = _uniform_interior(P, count, start_margin, rng)
    Z = _exit_points(P, X, _unit_directions(count, P.dimension, rng))
    lo = np.zeros(count)
    hi = np.ones(count)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        slack = P.slacks(X + mid[:, None] * (Z - X)).min(axis=1)
        high = slack > margins
        lo = np.where(high, mid, lo)
        hi = np.where(high, hi, mid)
    return X + lo[:, None] * (Z - X)


def facet_stress_points(P: Polytope, facet_id: int, count: int,
                        margins: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Interior points at prescribed slack against one specific facet.

    Draws a random convex combination of the facet's vertices, then mixes
    toward the polytope barycenter until the slack against that facet
    equals the rowwise margin.  All other slacks stay strictly positive.
    """
    margins = np.broadcast_to(np.asarray(margins, dtype=float), (count,))
    ids = sorted(P.incidence[facet_id])
    V = P.vertices[ids]
    w = rng.dirichlet(np.full(len(ids), 2.0), size=count)
    Y = w @ V
    c = P.barycenter()
    slack_c = float(P.slacks(c)[facet_id])
    lam = (margins / slack_c)[:, None]
    return Y + lam * (c - Y)
