import logging

import numpy as np

from app.config import get_settings
from app.errors import DimensionMismatch, DomainError, NotNormalized, SizeGuard
from app.schemas.blockenc import BlockEncoding, Lemma1Report, Lemma1Request
from app.schemas.pauli import PauliSum, PauliTerm
from app.schemas.state import StateVec
from app.services.moment_service import moment_service
from app.services.pauli_service import pauli_service, term_diagonal, term_phase
from app.services.state_service import state_service

logger = logging.getLogger(__name__)

BLOCK_TOL = 1e-9
MOMENT_TOL = 1e-10
UNITARY_TOL = 1e-10


def _term_matrix(term: PauliTerm) -> np.ndarray:
    dim = 1 << term.n_qubits
    cols = np.arange(dim, dtype=np.int64)
    mat = np.zeros((dim, dim), dtype=np.complex128)
    mat[cols ^ term.x_mask, cols] = term_diagonal(term.n_qubits, term.z_mask, term_phase(term))
    return mat


def chebyshev_reference(h_dense: np.ndarray, k: int) -> np.ndarray:
    """T_k(H) through the eigendecomposition, T_k(cos t) = cos(k t)."""
    evals, evecs = np.linalg.eigh(h_dense)
    values = np.cos(k * np.arccos(np.clip(evals, -1.0, 1.0)))
    return (evecs * values) @ evecs.conj().T


class BlockEncodingService:
    """Dense qubitization operators for small Pauli sums.

    Joint index = aux * 2^n_sys + sys. U applies sign_i P_i on aux branch i
    and acts as identity on padded branches; R reflects about |G> on the
    auxiliary register.
    """

    def __init__(self):
        self.settings = get_settings()

    def build_encoding(self, h: PauliSum) -> BlockEncoding:
        n_aux = (h.n_terms - 1).bit_length()
        if n_aux + h.n_qubits > self.settings.blockenc_max_qubits:
            raise SizeGuard(
                f"block encoding needs {n_aux + h.n_qubits} qubits, limit {self.settings.blockenc_max_qubits}"
            )
        sys_dim = 1 << h.n_qubits
        aux_dim = 1 << n_aux
        u_op = np.eye(aux_dim * sys_dim, dtype=np.complex128)
        g_vec = np.zeros(aux_dim, dtype=np.complex128)
        for i, wt in enumerate(h.terms):
            block = slice(i * sys_dim, (i + 1) * sys_dim)
            u_op[block, block] = _term_matrix(wt.term)
            g_vec[i] = np.sqrt(wt.coeff)
        reflection = 2.0 * np.outer(g_vec, g_vec.conj()) - np.eye(aux_dim)
        r_op = np.kron(reflection, np.eye(sys_dim))
        return BlockEncoding(n_sys=h.n_qubits, n_aux=n_aux, u_op=u_op, g_vec=g_vec, r_op=r_op)

    def _prepare(self, be: BlockEncoding) -> np.ndarray:
        return np.kron(be.g_vec[:, None], np.eye(be.sys_dim))

    def _check_k(self, k: int):
        if k < 0:
            raise DomainError(f"Chebyshev order must be nonnegative, got {k}")
        if k > self.settings.chebyshev_max_k:
            raise SizeGuard(f"Chebyshev order {k} exceeds limit {self.settings.chebyshev_max_k}")

    def block(self, be: BlockEncoding) -> np.ndarray:
        prep = self._prepare(be)
        return prep.conj().T @ be.u_op @ prep

    def chebyshev_block(self, be: BlockEncoding, k: int) -> np.ndarray:
        self._check_k(k)
        walk = be.r_op @ be.u_op
        prep = self._prepare(be)
        out = prep
        for _ in range(k):
            out = walk @ out
        return prep.conj().T @ out

    def measurement_identity(self, be: BlockEncoding, psi0: StateVec, k: int) -> float:
        """<R> on (RU)^(k/2)|G,psi0> for even k, <U> on (RU)^((k-1)/2)|G,psi0> for odd k."""
        self._check_k(k)
        if psi0.n_qubits != be.n_sys:
            raise DimensionMismatch(f"state has {psi0.n_qubits} qubits, encoding acts on {be.n_sys}")
        if abs(psi0.norm - 1.0) > 1e-10:
            raise NotNormalized(f"initial state has norm {psi0.norm!r}")
        walk = be.r_op @ be.u_op
        state = np.kron(be.g_vec, psi0.amps)
        for _ in range(k // 2):
            state = walk @ state
        observable = be.r_op if k % 2 == 0 else be.u_op
        return float(np.vdot(state, observable @ state).real)

    def unitarity_deviation(self, be: BlockEncoding) -> float:
        eye = np.eye(be.dim)
        return max(
            np.linalg.norm(be.u_op @ be.u_op - eye, 2),
            np.linalg.norm(be.r_op @ be.r_op - eye, 2),
            np.linalg.norm(be.u_op.conj().T @ be.u_op - eye, 2),
        )

    def verify_lemma1(self, req: Lemma1Request) -> Lemma1Report:
        worst_block = worst_moment = worst_unitary = 0.0
        d = req.kmax // 2 + 1
        for sample in range(req.samples):
            rng = np.random.default_rng(np.random.SeedSequence([req.seed, sample]))
            h = pauli_service.random_pauli_sum(req.qubits, req.terms, rng)
            psi0 = state_service.random_state(req.qubits, rng)
            be = self.build_encoding(h)
            h_dense = pauli_service.to_dense(h)
            mu = moment_service.compute_moments(h, psi0, d).array
            worst_unitary = max(worst_unitary, self.unitarity_deviation(be))
            for k in range(req.kmax + 1):
                deviation = np.linalg.norm(self.chebyshev_block(be, k) - chebyshev_reference(h_dense, k), 2)
                worst_block = max(worst_block, float(deviation))
                worst_moment = max(worst_moment, abs(self.measurement_identity(be, psi0, k) - mu[k]))
        passed = worst_block < BLOCK_TOL and worst_moment < MOMENT_TOL and worst_unitary < UNITARY_TOL
        logger.info(
            f"[BlockEnc] {req.samples} sample(s), kmax={req.kmax}: block {worst_block:.2e}, "
            f"moments {worst_moment:.2e}, unitarity {worst_unitary:.2e}"
        )
        return Lemma1Report(
            qubits=req.qubits,
            terms=req.terms,
            seed=req.seed,
            kmax=req.kmax,
            samples=req.samples,
            max_block_deviation=worst_block,
            max_moment_deviation=worst_moment,
            max_unitarity_deviation=float(worst_unitary),
            passed=passed,
        )


blockenc_service = BlockEncodingService()
