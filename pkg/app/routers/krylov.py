from typing import Literal

from fastapi import APIRouter, Query

from app.errors import KrylovLabError
from app.routers import to_http
from app.schemas.krylov import AssembleRequest, KrylovPair, SolveRequest, ThresholdReport
from app.services.krylov_service import krylov_service

router = APIRouter()


@router.post("/assemble", response_model=KrylovPair)
def assemble(request: AssembleRequest):
    try:
        return krylov_service.assemble(request.moments)
    except KrylovLabError as e:
        raise to_http(e)


@router.post("/solve", response_model=ThresholdReport)
def solve(request: SolveRequest):
    try:
        return krylov_service.solve_thresholded(request.pair, request.epsilon)
    except KrylovLabError as e:
        raise to_http(e)


@router.get("/threshold")
def threshold(
    eta: float = Query(0.0, ge=0),
    family: Literal["spin", "molecule"] = "spin",
):
    return {"eta": eta, "family": family, "epsilon": krylov_service.pick_threshold(eta, family)}
