from fastapi import APIRouter
from fastapi.responses import PlainTextResponse

from app.errors import KrylovLabError
from app.routers import to_http
from app.schemas.experiment import ExperimentConfig
from app.services.experiment_service import experiment_service

router = APIRouter()


@router.post("/fig2", response_class=PlainTextResponse)
def run_fig2(cfg: ExperimentConfig, smoothed: bool = False):
    """Energy error per site against Krylov dimension, as CSV."""
    try:
        result = experiment_service.run_fig2(cfg.model_copy(update={"output": None}))
    except KrylovLabError as e:
        raise to_http(e)
    return result.smoothed_csv if smoothed else result.csv


@router.post("/fig3", response_class=PlainTextResponse)
def run_fig3(cfg: ExperimentConfig):
    """Converged energy error per site against noise rate, as CSV."""
    try:
        return experiment_service.run_fig3(cfg.model_copy(update={"output": None}))
    except KrylovLabError as e:
        raise to_http(e)
