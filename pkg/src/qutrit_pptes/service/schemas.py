"""Pydantic request/response models for the HTTP service.

Shapes are validated structurally here; deep numeric validation (unit
norms, Hermiticity, angle domains) happens in the core package, whose
errors the app maps onto HTTP status codes.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

ComplexPair = list[float]  # [re, im]
Vector3 = list[ComplexPair]
Vector9 = list[ComplexPair]
Matrix3 = list[Vector3]
Matrix9 = list[Vector9]


class ProductVectorModel(BaseModel):
    a: Vector3
    b: Vector3


class AnglesModel(BaseModel):
    gamma_A: float
    theta_A: float
    phi_A: float
    gamma_B: float
    theta_B: float
    phi_B: float


class IloModel(BaseModel):
    A: Matrix3
    B: Matrix3


class SearchConfigModel(BaseModel):
    grid_per_chart: int = 24
    newton_iters: int = 60
    residual_tol: float = 1e-10
    dedupe_tol: float = 1e-6
    restarts: int = 200


class GenerateRequest(BaseModel):
    angles: AnglesModel


class QuintupleRequest(BaseModel):
    quintuple: list[ProductVectorModel] = Field(min_length=5, max_length=5)


class BuildRequest(BaseModel):
    angles: AnglesModel
    ilo: Optional[IloModel] = None


class StateRequest(BaseModel):
    state: Matrix9
    seed: int = 0


class KernelRequest(StateRequest):
    config: Optional[SearchConfigModel] = None


class WitnessRequest(StateRequest):
    restarts: int = 200


class FixturesRequest(BaseModel):
    seed: int = 0


class QuintupleResponse(BaseModel):
    quintuple: list[ProductVectorModel]


class UpbFixtureResponse(BaseModel):
    product_vectors: list[ProductVectorModel]
    state: Matrix9
    angles: Optional[AnglesModel] = None


class InvariantsResponse(BaseModel):
    JA: Vector3
    JB: Vector3
    symbol: Optional[str]


class ClassifyResponse(BaseModel):
    kind: str
    double_index: Optional[int] = None
    sixth: Optional[ProductVectorModel] = None


class StateResponse(BaseModel):
    state: Matrix9


class CheckResponse(BaseModel):
    rank: int
    ppt: bool
    entangled: Optional[bool]
    pt_rank: int


class ReconstructResponse(BaseModel):
    upb: list[ProductVectorModel]
    A: Matrix3
    B: Matrix3
    residual: float


class ProductsResponse(BaseModel):
    products: list[ProductVectorModel]
    count: int


class StabilizerResponse(BaseModel):
    order: int
    elements: list[str]
    realizations: dict[str, IloModel]


class WitnessResponse(BaseModel):
    P: Matrix9
    epsilon: float
    certificate: ProductVectorModel


class FixtureEntry(BaseModel):
    name: str
    expected_count: int
    found_count: int
    count_ok: bool
    points_ok: Optional[bool] = None
    range_product_free_ok: Optional[bool] = None
    passed: bool


class SymbolClosureEntry(BaseModel):
    source: str
    symbols: list[str]
    quintuples: int
    matches_table: bool


class FixtureReport(BaseModel):
    fixtures: list[FixtureEntry]
    all_passed: bool
    symbol_closure: list[SymbolClosureEntry]


class ErrorBody(BaseModel):
    type: str
    message: str


class ErrorResponse(BaseModel):
    error: ErrorBody
