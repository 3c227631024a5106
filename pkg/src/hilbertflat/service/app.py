"""FastAPI application exposing the library as a long-running service.

Atlas construction dominates request cost for repeated queries, so built
atlases are memoized per vertex set.  All JSON responses use sorted keys
and compact separators, making seeded runs byte-reproducible.  Error
mapping: invalid input 400, numeric failure (including log-map overflow)
500.
"""

from __future__ import annotations

import json
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse

from ..errors import InvalidInput, NumericFailure
from ..estimators import (
    emit_grid,
    estimate_bilipschitz,
    estimate_cell_constants,
    isometry_check,
    nested_ratio_experiment,
)
from ..flatten import build_atlas, flatten_in_cell, locate, locate_cone, unflatten
from ..metric import HilbertStructure, distance, finsler_norm
from ..polytope import Polytope
from ..sampling import SampleConfig
from . import schemas


class CanonicalJSONResponse(JSONResponse):
    """UTF-8 JSON with sorted keys and compact separators."""

    def render(self, content: Any) -> bytes:
        return json.dumps(content, sort_keys=True, separators=(",", ":"),
                          ensure_ascii=False).encode("utf-8")


_ATLAS_CACHE_LIMIT = 32


def create_app() -> FastAPI:
    app = FastAPI(title="hilbertflat", default_response_class=CanonicalJSONResponse)
    atlas_cache: dict[bytes, Any] = {}

    def atlas_for(P: Polytope):
        key = P.vertices.tobytes()
        if key not in atlas_cache:
            if len(atlas_cache) >= _ATLAS_CACHE_LIMIT:
                atlas_cache.pop(next(iter(atlas_cache)))
            atlas_cache[key] = build_atlas(P)
        return atlas_cache[key]

    @app.exception_handler(InvalidInput)
    async def invalid_input_handler(request: Request, exc: InvalidInput):
        return CanonicalJSONResponse(
            status_code=400, content={"error": type(exc).__name__, "detail": str(exc)})

    @app.exception_handler(NumericFailure)
    async def numeric_failure_handler(request: Request, exc: NumericFailure):
        return CanonicalJSONResponse(
            status_code=500, content={"error": type(exc).__name__, "detail": str(exc)})

    @app.exception_handler(OverflowError)
    async def overflow_handler(request: Request, exc: OverflowError):
        return CanonicalJSONResponse(
            status_code=500, content={"error": "OverflowError", "detail": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        detail = "; ".join(
            f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}" for e in exc.errors())
        return CanonicalJSONResponse(
            status_code=400, content={"error": "ValidationError", "detail": detail})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return {"status": "ok"}

    @app.post("/distance", response_model=schemas.DistanceResponse)
    def ep_distance(req: schemas.DistanceRequest):
        H = HilbertStructure(req.polytope.to_polytope())
        return {"distance": distance(H, req.p, req.q)}

    @app.post("/finsler", response_model=schemas.FinslerResponse)
    def ep_finsler(req: schemas.FinslerRequest):
        H = HilbertStructure(req.polytope.to_polytope())
        return {"finsler_norm": finsler_norm(H, req.p, req.v)}

    @app.post("/subdivide", response_model=schemas.SubdivideResponse)
    def ep_subdivide(req: schemas.SubdivideRequest):
        P = req.polytope.to_polytope()
        atlas = atlas_for(P)
        cells = [
            {"id": c.id, "flag": list(c.flag.chain),
             "vertices": [[float(v) for v in row] for row in c.vertices]}
            for c in atlas.cells
        ]
        return {"dimension": P.dimension, "cell_count": len(cells), "cells": cells}

    @app.post("/flatten", response_model=schemas.FlattenResponse)
    def ep_flatten(req: schemas.FlattenRequest):
        P = req.polytope.to_polytope()
        atlas = atlas_for(P)
        i = locate(atlas, req.p)
        return {"image": [float(v) for v in flatten_in_cell(atlas, i, req.p)], "cell": i}

    @app.post("/unflatten", response_model=schemas.UnflattenResponse)
    def ep_unflatten(req: schemas.UnflattenRequest):
        P = req.polytope.to_polytope()
        atlas = atlas_for(P)
        return {"point": [float(v) for v in unflatten(atlas, req.y)],
                "cell": locate_cone(atlas, req.y)}

    @app.post("/estimate/lipschitz", response_model=schemas.LipschitzResponse)
    def ep_lipschitz(req: schemas.EstimateRequest):
        P = req.polytope.to_polytope()
        cfg = SampleConfig(req.seed, req.samples, req.margin)
        report = estimate_bilipschitz(P, cfg)
        return {"L_hat": report.headline, "report": report.to_dict()}

    @app.post("/estimate/cells", response_model=schemas.CellConstantsResponse)
    def ep_cells(req: schemas.EstimateRequest):
        P = req.polytope.to_polytope()
        cfg = SampleConfig(req.seed, req.samples, req.margin)
        reports = estimate_cell_constants(P, cfg)
        k_hat = [r.headline for r in reports]
        sup_half = max(r.headline / r.stability for r in reports)
        return {
            "k_hat": k_hat,
            "sup_k_hat": max(k_hat),
            "sup_stability": max(k_hat) / sup_half,
            "cells": [r.to_dict() for r in reports],
        }

    @app.post("/estimate/nested-ratio", response_model=schemas.NestedRatioResponse)
    def ep_nested(req: schemas.NestedRatioRequest):
        cfg = SampleConfig(req.seed, req.samples, req.margin)
        report = nested_ratio_experiment(
            req.s.to_polytope(), req.c1.to_polytope(), req.c2.to_polytope(), cfg)
        return {"M_hat": report.max_ratio, "report": report.to_dict()}

    @app.post("/check-isometry", response_model=schemas.IsometryResponse)
    def ep_isometry(req: schemas.IsometryRequest):
        cfg = SampleConfig(req.seed, req.samples, req.margin)
        return {"max_deviation": isometry_check(req.dim, cfg)}

    @app.post("/grid")
    def ep_grid(req: schemas.GridRequest):
        rows = emit_grid(req.polytope.to_polytope(), req.resolution)
        return PlainTextResponse("\n".join(rows) + "\n", media_type="text/csv")

    return app


app = create_app()
