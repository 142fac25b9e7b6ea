from fastapi import APIRouter

from app.errors import KrylovLabError
from app.routers import to_http
from app.schemas.blockenc import Lemma1Report, Lemma1Request
from app.services.blockenc_service import blockenc_service

router = APIRouter()


@router.post("/lemma1", response_model=Lemma1Report)
def verify_lemma1(request: Lemma1Request):
    """Check (RU)^k block-encodes T_k(H) and the even/odd measurement identities on random Pauli sums."""
    try:
        return blockenc_service.verify_lemma1(request)
    except KrylovLabError as e:
        raise to_http(e)
