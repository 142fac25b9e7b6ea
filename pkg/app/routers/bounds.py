from typing import Literal, Optional

from fastapi import APIRouter, Query

from app.errors import KrylovLabError
from app.routers import to_http
from app.schemas.bounds import BoundParams, BoundReport, GateCostReport
from app.services.bounds_service import bounds_service

router = APIRouter()


@router.post("", response_model=BoundReport)
def evaluate_bounds(params: BoundParams):
    try:
        return bounds_service.bound_report(params)
    except KrylovLabError as e:
        raise to_http(e)


@router.get("/gatecount", response_model=GateCostReport)
def gate_count(
    n: int = Query(..., ge=1),
    t: int = Query(..., ge=1),
    scheme: Literal["binary_index", "symplectic"] = "binary_index",
    d: Optional[int] = Query(None, ge=1),
):
    try:
        return bounds_service.gate_costs(n, t, scheme, d)
    except KrylovLabError as e:
        raise to_http(e)
