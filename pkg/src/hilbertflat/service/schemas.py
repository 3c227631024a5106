"""Request and response models for the HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..polytope import Polytope, polytope_from_dict


class HalfspaceSpec(BaseModel):
    normal: list[float]
    offset: float


class PolytopeSpec(BaseModel):
    """Wire form of a polytope; declared halfspaces are cross-checked."""

    dimension: int
    vertices: list[list[float]]
    halfspaces: list[HalfspaceSpec] | None = None

    def to_polytope(self) -> Polytope:
        return polytope_from_dict(self.model_dump())


class DistanceRequest(BaseModel):
    polytope: PolytopeSpec
    p: list[float]
    q: list[float]


class DistanceResponse(BaseModel):
    distance: float


class FinslerRequest(BaseModel):
    polytope: PolytopeSpec
    p: list[float]
    v: list[float]


class FinslerResponse(BaseModel):
    finsler_norm: float


class SubdivideRequest(BaseModel):
    polytope: PolytopeSpec


class CellModel(BaseModel):
    id: int
    flag: list[int]
    vertices: list[list[float]]


class SubdivideResponse(BaseModel):
    dimension: int
    cell_count: int
    cells: list[CellModel]


class FlattenRequest(BaseModel):
    polytope: PolytopeSpec
    p: list[float]


class FlattenResponse(BaseModel):
    image: list[float]
    cell: int


class UnflattenRequest(BaseModel):
    polytope: PolytopeSpec
    y: list[float]


class UnflattenResponse(BaseModel):
    point: list[float]
    cell: int


class SamplingFields(BaseModel):
    seed: int = 0
    samples: int = Field(default=1000, ge=1)
    margin: float = 1e-6


class EstimateRequest(SamplingFields):
    polytope: PolytopeSpec


class HistogramModel(BaseModel):
    bin_edges: list[float]
    counts: list[int]


class RatioReportModel(BaseModel):
    min_ratio: float
    max_ratio: float
    headline: float
    histogram: HistogramModel
    sample_count: int
    skipped: int
    stability: float


class LipschitzResponse(BaseModel):
    L_hat: float
    report: RatioReportModel


class CellConstantsResponse(BaseModel):
    k_hat: list[float]
    sup_k_hat: float
    sup_stability: float
    cells: list[RatioReportModel]


class NestedRatioRequest(SamplingFields):
    s: PolytopeSpec
    c1: PolytopeSpec
    c2: PolytopeSpec


class NestedRatioResponse(BaseModel):
    M_hat: float
    report: RatioReportModel


class IsometryRequest(SamplingFields):
    dim: int


class IsometryResponse(BaseModel):
    max_deviation: float


class GridRequest(BaseModel):
    polytope: PolytopeSpec
    resolution: int = Field(ge=0)


class HealthResponse(BaseModel):
    status: str
