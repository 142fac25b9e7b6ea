from fastapi import APIRouter

from app.errors import KrylovLabError
from app.routers import to_http
from app.schemas.experiment import MomentsRequest
from app.schemas.moments import MomentSeq
from app.services.experiment_service import experiment_service

router = APIRouter()


@router.post("", response_model=MomentSeq)
def compute_moments(request: MomentsRequest):
    try:
        return experiment_service.run_moments(request)
    except KrylovLabError as e:
        raise to_http(e)
