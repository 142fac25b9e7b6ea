from fastapi import APIRouter

from app.errors import KrylovLabError
from app.routers import to_http
from app.schemas.lattice import LatticeSpec, ModelSummary
from app.schemas.pauli import PauliParseRequest, PauliSumResponse
from app.services.experiment_service import experiment_service
from app.services.pauli_service import pauli_service

router = APIRouter()


@router.post("/j1j2", response_model=ModelSummary)
def j1j2_summary(spec: LatticeSpec):
    """Build the J1-J2 lattice and report its size, scale, ground energy and AFM overlap."""
    try:
        return experiment_service.model_summary(spec)
    except KrylovLabError as e:
        raise to_http(e)


@router.post("/parse", response_model=PauliSumResponse)
def parse_hamiltonian(request: PauliParseRequest):
    try:
        h = pauli_service.load_hamiltonian(request.text)
    except KrylovLabError as e:
        raise to_http(e)
    return PauliSumResponse(
        n_qubits=h.n_qubits,
        n_terms=h.n_terms,
        scale=h.scale,
        terms=[(wt.coeff, pauli_service.pauli_label(wt.term)) for wt in h.terms],
    )
