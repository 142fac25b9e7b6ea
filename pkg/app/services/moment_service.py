import logging
from typing import Sequence

import numpy as np

from app.config import get_settings
from app.errors import ComplexMoment, DimensionMismatch, DomainError, LengthMismatch, NotNormalized
from app.schemas.moments import MomentSeq, NoiseInfo
from app.schemas.pauli import PauliSum
from app.schemas.state import StateVec
from app.services.state_service import PauliOperator

logger = logging.getLogger(__name__)


class MomentService:
    def __init__(self):
        self.settings = get_settings()

    def _check_inputs(self, h: PauliSum, psi0: StateVec, d: int):
        if h.n_qubits != psi0.n_qubits:
            raise DimensionMismatch(
                f"Hamiltonian acts on {h.n_qubits} qubits, state has {psi0.n_qubits}"
            )
        if abs(psi0.norm - 1.0) > 1e-10:
            raise NotNormalized(f"initial state has norm {psi0.norm!r}")
        if d < 1:
            raise DomainError("Krylov dimension must be at least 1")

    def compute_moments(self, h: PauliSum, psi0: StateVec, d: int) -> MomentSeq:
        """mu_k = Re <psi0|T_k(H)|psi0> for k < 2d via the three-term recurrence."""
        self._check_inputs(h, psi0, d)
        op = PauliOperator(h)
        count = 2 * d
        raw = np.empty(count, dtype=np.complex128)
        prev = psi0.amps
        raw[0] = np.vdot(psi0.amps, prev)
        if count > 1:
            cur = op.apply(prev)
            raw[1] = np.vdot(psi0.amps, cur)
            for k in range(2, count):
                prev, cur = cur, 2.0 * op.apply(cur) - prev
                raw[k] = np.vdot(psi0.amps, cur)
        worst = float(np.max(np.abs(raw.imag)))
        if worst > self.settings.imag_tol:
            raise ComplexMoment(f"imaginary part {worst:.3e} exceeds {self.settings.imag_tol:.1e}")
        mu = raw.real
        mu[0] = 1.0
        logger.debug(f"[Moments] {count} moments on {h.n_qubits} qubits")
        return MomentSeq(d_max=d, mu=tuple(mu.tolist()), scale=h.scale)

    def add_noise(
        self,
        m: MomentSeq,
        eta: float,
        seed: int,
        stream: Sequence[int] = (),
    ) -> MomentSeq:
        if eta < 0:
            raise DomainError(f"noise rate must be nonnegative, got {eta!r}")
        if not m.noiseless:
            raise DomainError("moments already carry noise")
        mu = m.array
        if eta > 0:
            rng = np.random.default_rng(np.random.SeedSequence([seed, *stream]))
            mu[1:] += rng.normal(0.0, eta, size=mu.shape[0] - 1)
        return MomentSeq(
            d_max=m.d_max,
            mu=tuple(mu.tolist()),
            noise=NoiseInfo(eta=eta, seed=seed, stream=tuple(stream)),
            scale=m.scale,
        )

    def noisy_replicas(
        self,
        m: MomentSeq,
        eta: float,
        seed: int,
        trials: int,
        stream: Sequence[int] = (),
    ) -> list[MomentSeq]:
        return [self.add_noise(m, eta, seed, (*stream, trial)) for trial in range(trials)]

    def truncate(self, m: MomentSeq, d: int) -> MomentSeq:
        if not 1 <= d <= m.d_max:
            raise LengthMismatch(f"cannot take dimension {d} from {m.d_max} moment pairs")
        return MomentSeq(d_max=d, mu=m.mu[: 2 * d], noise=m.noise, scale=m.scale)

    def explicit_krylov_basis(self, h: PauliSum, psi0: StateVec, d: int) -> np.ndarray:
        """Columns T_k(H)|psi0>, k = 0..d-1."""
        self._check_inputs(h, psi0, d)
        op = PauliOperator(h)
        basis = np.empty((psi0.dim, d), dtype=np.complex128)
        basis[:, 0] = psi0.amps
        if d > 1:
            basis[:, 1] = op.apply(psi0.amps)
        for k in range(2, d):
            basis[:, k] = 2.0 * op.apply(basis[:, k - 1]) - basis[:, k - 2]
        return basis


moment_service = MomentService()
