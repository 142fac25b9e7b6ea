import logging

import numpy as np

from app.errors import DimensionMismatch, DomainError
from app.schemas.pauli import PauliSum
from app.schemas.state import StateVec
from app.services.pauli_service import term_diagonal, term_phase

logger = logging.getLogger(__name__)


class PauliOperator:
    """Matrix-free application plan for a PauliSum.

    Terms sharing an X-mask act as the same permutation, so each group
    collapses into one complex diagonal followed by an index flip. Groups
    are applied in ascending X-mask order, which fixes the reduction order.
    """

    def __init__(self, h: PauliSum):
        self.n_qubits = h.n_qubits
        self.dim = 1 << h.n_qubits
        groups: dict[int, np.ndarray] = {}
        for wt in h.terms:
            d = wt.coeff * term_diagonal(h.n_qubits, wt.term.z_mask, term_phase(wt.term))
            x = wt.term.x_mask
            groups[x] = groups[x] + d if x in groups else d
        self._idx = np.arange(self.dim, dtype=np.int64)
        self._groups = sorted(groups.items())
        self.is_real = all(not np.any(d.imag) for _, d in self._groups)

    @property
    def n_groups(self) -> int:
        return len(self._groups)

    def apply(self, v: np.ndarray) -> np.ndarray:
        if v.shape[0] != self.dim:
            raise DimensionMismatch(f"operand has leading dimension {v.shape[0]}, expected {self.dim}")
        out = np.zeros(v.shape, dtype=np.complex128)
        for x, d in self._groups:
            dv = d[:, None] * v if v.ndim == 2 else d * v
            out += dv[self._idx ^ x]
        return out

    __call__ = apply

    def dense(self) -> np.ndarray:
        return self.apply(np.eye(self.dim, dtype=np.complex128))


class StateService:
    def plan(self, h: PauliSum) -> PauliOperator:
        return PauliOperator(h)

    def apply_sum(self, h: PauliSum, v: StateVec) -> StateVec:
        if h.n_qubits != v.n_qubits:
            raise DimensionMismatch(
                f"Hamiltonian acts on {h.n_qubits} qubits, state has {v.n_qubits}"
            )
        return StateVec(n_qubits=v.n_qubits, amps=PauliOperator(h).apply(v.amps))

    def inner(self, u: StateVec, v: StateVec) -> complex:
        if u.n_qubits != v.n_qubits:
            raise DimensionMismatch(f"states have {u.n_qubits} and {v.n_qubits} qubits")
        return complex(np.vdot(u.amps, v.amps))

    def basis_state(self, n_qubits: int, index: int) -> StateVec:
        if not 0 <= index < 1 << n_qubits:
            raise DomainError(f"basis index {index} out of range for {n_qubits} qubits")
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return StateVec(n_qubits=n_qubits, amps=amps)

    def random_state(self, n_qubits: int, rng: np.random.Generator) -> StateVec:
        dim = 1 << n_qubits
        amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        return StateVec(n_qubits=n_qubits, amps=amps / np.linalg.norm(amps))

    def rayleigh_quotient(self, h: PauliSum, v: StateVec) -> float:
        hv = self.apply_sum(h, v)
        return float(np.vdot(v.amps, hv.amps).real / np.vdot(v.amps, v.amps).real)


state_service = StateService()
