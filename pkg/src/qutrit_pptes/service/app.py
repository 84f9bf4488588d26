"""HTTP service exposing the rank-4 PPT entangled state toolkit.

All endpoints are stateless JSON-in/JSON-out wrappers around the core
package.  Validation failures (bad shapes, domain violations, inputs
that are not of the kind an operation requires) return 400; results
that contradict the underlying theory (degree-bound violations, rebuild
residual failures, ambiguous borderline decisions) return 409 so that
clients can distinguish "bad request" from "regression alarm".
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import fixtures as fixture_mod
from .. import pptes, upb
from ..stabilizer import stabilizer as compute_stabilizer
from ..witness import build_witness
from ..errors import (
    BorderlineError,
    MathInconsistencyError,
    QutritPptesError,
    ValidationError,
)
from ..invariants import classify_quintuple, invariants
from ..linalg import is_hermitian, is_psd, numeric_rank, partial_transpose
from ..serialize import (
    decode_angles,
    decode_matrix,
    decode_product_vector,
    encode_angles,
    encode_matrix,
    encode_product_vector,
    encode_stabilizer,
    encode_vector,
    encode_witness,
)
from ..subspace import SearchConfig
from . import schemas

__all__ = ["create_app"]


def _decode_state(data) -> np.ndarray:
    return decode_matrix(data, (9, 9))


def _decode_quintuple(models) -> list:
    return [decode_product_vector(m.model_dump()) for m in models]


def _search_config(model: schemas.SearchConfigModel | None, seed: int) -> SearchConfig:
    if model is None:
        return SearchConfig(seed=seed)
    return SearchConfig(
        grid_per_chart=model.grid_per_chart,
        newton_iters=model.newton_iters,
        residual_tol=model.residual_tol,
        dedupe_tol=model.dedupe_tol,
        restarts=model.restarts,
        seed=seed,
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="qutrit-pptes",
        description="Rank-4 PPT entangled states of two qutrits: UPB families, "
        "invariants, reconstruction, stabilizers and witnesses.",
        version="0.1.0",
    )

    @app.exception_handler(ValidationError)
    async def _validation(request: Request, exc: ValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": {"type": type(exc).__name__, "message": str(exc)}},
        )

    @app.exception_handler(MathInconsistencyError)
    async def _inconsistency(request: Request, exc: MathInconsistencyError):
        return JSONResponse(
            status_code=409,
            content={"error": {"type": type(exc).__name__, "message": str(exc)}},
        )

    @app.exception_handler(BorderlineError)
    async def _borderline(request: Request, exc: BorderlineError):
        return JSONResponse(
            status_code=409,
            content={"error": {"type": type(exc).__name__, "message": str(exc)}},
        )

    @app.exception_handler(QutritPptesError)
    async def _generic(request: Request, exc: QutritPptesError):
        return JSONResponse(
            status_code=400,
            content={"error": {"type": type(exc).__name__, "message": str(exc)}},
        )

    @app.exception_handler(RequestValidationError)
    async def _request_validation(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": {"type": "RequestValidationError", "message": str(exc)}},
        )

    @app.post("/upb/generate", response_model=schemas.QuintupleResponse)
    def upb_generate(req: schemas.GenerateRequest):
        angles = decode_angles(req.angles.model_dump())
        quintuple = upb.upb_from_angles(angles)
        return {"quintuple": [encode_product_vector(p) for p in quintuple]}

    @app.get("/upb/tiles", response_model=schemas.UpbFixtureResponse)
    def upb_tiles():
        angles = upb.tiles_angles()
        quintuple = upb.upb_from_angles(angles)
        state = pptes.projector_state(quintuple)
        return {
            "product_vectors": [encode_product_vector(p) for p in quintuple],
            "state": encode_matrix(state),
            "angles": encode_angles(angles),
        }

    @app.get("/upb/pyramid", response_model=schemas.UpbFixtureResponse)
    def upb_pyramid():
        sextet = upb.pyramid_sextet()
        state = pptes.pyramid_state()
        return {
            "product_vectors": [encode_product_vector(p) for p in sextet],
            "state": encode_matrix(state),
            "angles": None,
        }

    @app.post("/invariants", response_model=schemas.InvariantsResponse)
    def invariants_route(req: schemas.QuintupleRequest):
        quintuple = _decode_quintuple(req.quintuple)
        s = invariants(quintuple)
        return {
            "JA": encode_vector(s.JA),
            "JB": encode_vector(s.JB),
            "symbol": upb.symbol(s),
        }

    @app.post("/classify", response_model=schemas.ClassifyResponse)
    def classify_route(req: schemas.QuintupleRequest):
        quintuple = _decode_quintuple(req.quintuple)
        c = classify_quintuple(quintuple)
        return {
            "kind": c.kind,
            "double_index": c.double_index,
            "sixth": encode_product_vector(c.sixth) if c.sixth is not None else None,
        }

    @app.post("/pptes/build", response_model=schemas.StateResponse)
    def pptes_build(req: schemas.BuildRequest):
        angles = decode_angles(req.angles.model_dump())
        state = pptes.projector_state(upb.upb_from_angles(angles))
        if req.ilo is not None:
            a = decode_matrix(req.ilo.A, (3, 3))
            b = decode_matrix(req.ilo.B, (3, 3))
            if abs(np.linalg.det(a)) < 1e-12 or abs(np.linalg.det(b)) < 1e-12:
                raise ValidationError("ILO factors must be invertible")
            n = np.kron(a, b)
            state = n @ state @ n.conj().T
            state = state / state.trace().real
        return {"state": encode_matrix(state)}

    @app.post("/pptes/check", response_model=schemas.CheckResponse)
    def pptes_check(req: schemas.StateRequest):
        rho = _decode_state(req.state)
        if not is_hermitian(rho) or not is_psd(rho):
            raise ValidationError("state must be Hermitian positive semidefinite")
        rank = numeric_rank(rho)
        ppt = is_psd(partial_transpose(rho))
        if not ppt:
            entangled = True
        elif rank == 4:
            entangled = pptes.is_pptes_rank4(rho, SearchConfig(seed=req.seed))
        else:
            entangled = None
        return {
            "rank": rank,
            "ppt": ppt,
            "entangled": entangled,
            "pt_rank": pptes.pt_rank(rho),
        }

    @app.post("/pptes/reconstruct", response_model=schemas.ReconstructResponse)
    def pptes_reconstruct(req: schemas.StateRequest):
        rho = _decode_state(req.state)
        result = pptes.reconstruct(rho, SearchConfig(seed=req.seed))
        return {
            "upb": [encode_product_vector(p) for p in result.upb],
            "A": encode_matrix(result.a),
            "B": encode_matrix(result.b),
            "residual": result.residual,
        }

    @app.post("/kernel/products", response_model=schemas.ProductsResponse)
    def kernel_products_route(req: schemas.KernelRequest):
        rho = _decode_state(req.state)
        cfg = _search_config(req.config, req.seed)
        points = pptes.kernel_products(rho, cfg)
        return {
            "products": [encode_product_vector(p) for p in points],
            "count": len(points),
        }

    @app.post("/stabilizer", response_model=schemas.StabilizerResponse)
    def stabilizer_route(req: schemas.StateRequest):
        rho = _decode_state(req.state)
        points = pptes.kernel_products(rho, SearchConfig(seed=req.seed))
        if len(points) != 6:
            raise ValidationError(
                f"kernel contains {len(points)} product states, stabilizer needs 6"
            )
        group = compute_stabilizer(points)
        return encode_stabilizer(group)

    @app.post("/witness", response_model=schemas.WitnessResponse)
    def witness_route(req: schemas.WitnessRequest):
        rho = _decode_state(req.state)
        w = build_witness(rho, restarts=req.restarts, seed=req.seed)
        return encode_witness(w)

    @app.post("/fixtures/verify", response_model=schemas.FixtureReport)
    def fixtures_verify(req: schemas.FixturesRequest):
        report = fixture_mod.verify_intersection_counts(SearchConfig(seed=req.seed))
        closure = []
        tiles_q = upb.tiles_quintuple()
        from ..invariants import sixth_state

        sources = [("tiles", tiles_q + [sixth_state(tiles_q)]), ("pyramid", upb.pyramid_sextet())]
        for name, sextet in sources:
            scan = upb.sextet_symbol_scan(sextet)
            closure.append(
                {
                    "source": name,
                    "symbols": sorted(scan),
                    "quintuples": sum(scan.values()),
                    "matches_table": sorted(scan) == sorted(upb.UPB_SYMBOL_TABLE),
                }
            )
        report["symbol_closure"] = closure
        return report

    return app
