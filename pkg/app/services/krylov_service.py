import logging
import math
from typing import Literal, Optional, Sequence

import numpy as np
import scipy.linalg

from app.config import get_settings
from app.errors import AllDiscarded, ConvergenceFailure, DomainError, EmptyInput, LengthMismatch
from app.schemas.krylov import KrylovPair, Provenance, ThresholdReport
from app.schemas.moments import MomentSeq

logger = logging.getLogger(__name__)


def assemble_arrays(mu: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Overlap and projected-Hamiltonian matrices from 2d Chebyshev moments.

    S_ij = (mu[i+j] + mu[|i-j|]) / 2
    H_ij = (mu[i+j+1] + mu[|i+j-1|] + mu[|i-j+1|] + mu[|i-j-1|]) / 4
    """
    mu = np.asarray(mu, dtype=np.float64)
    if mu.shape != (2 * d,):
        raise LengthMismatch(f"need {2 * d} moments for dimension {d}, got {mu.shape[0]}")
    i, j = np.indices((d, d))
    s_mat = 0.5 * (mu[i + j] + mu[np.abs(i - j)])
    # grouped so that h_mat is exactly symmetric
    h_mat = 0.25 * (
        (mu[i + j + 1] + mu[np.abs(i + j - 1)])
        + (mu[np.abs(i - j + 1)] + mu[np.abs(i - j - 1)])
    )
    return s_mat, h_mat


class KrylovService:
    def __init__(self):
        self.settings = get_settings()

    def assemble(self, m: MomentSeq) -> KrylovPair:
        s_mat, h_mat = assemble_arrays(m.array, m.d_max)
        provenance = Provenance(
            eta=m.noise.eta if m.noise else None,
            seed=m.noise.seed if m.noise else None,
            scale=m.scale,
        )
        return KrylovPair(
            d=m.d_max,
            h_mat=tuple(map(tuple, h_mat.tolist())),
            s_mat=tuple(map(tuple, s_mat.tolist())),
            provenance=provenance,
        )

    def solve_arrays(
        self, s_mat: np.ndarray, h_mat: np.ndarray, epsilon: float, scale: float = 1.0
    ) -> ThresholdReport:
        if not epsilon > 0:
            raise DomainError(f"threshold must be positive, got {epsilon!r}")
        evals, evecs = np.linalg.eigh(s_mat)
        order = np.argsort(evals)[::-1]
        evals, evecs = evals[order], evecs[:, order]
        keep = evals > epsilon
        kept = int(keep.sum())
        discarded = evals[~keep]
        if kept == 0:
            raise AllDiscarded(
                f"no overlap eigenvalue above {epsilon:.3e} (largest {evals[0]:.3e})"
            )
        basis = evecs[:, keep] / np.sqrt(evals[keep])
        reduced = basis.T @ h_mat @ basis
        reduced = 0.5 * (reduced + reduced.T)
        energies = np.linalg.eigvalsh(reduced)
        return ThresholdReport(
            epsilon=epsilon,
            kept=kept,
            discarded_eigs=discarded.tolist(),
            eps_total=math.fsum(np.clip(discarded, 0.0, None).tolist()),
            energy_normalized=float(energies[0]),
            energy_physical=float(energies[0]) * scale,
            second_energy_normalized=float(energies[1]) if kept > 1 else None,
            kept_condition=float(evals[0] / evals[kept - 1]),
        )

    def solve_thresholded(self, kp: KrylovPair, epsilon: float) -> ThresholdReport:
        report = self.solve_arrays(kp.s_array, kp.h_array, epsilon, kp.provenance.scale)
        logger.debug(
            f"[Krylov] D={kp.d} eps={epsilon:.3e}: kept {report.kept}, E={report.energy_normalized:.12g}"
        )
        return report

    def solve_unthresholded(self, kp: KrylovPair) -> float:
        try:
            energies = scipy.linalg.eigh(kp.h_array, kp.s_array, eigvals_only=True)
        except np.linalg.LinAlgError as e:
            raise ConvergenceFailure(f"overlap matrix is not positive definite: {e}")
        return float(energies[0])

    def pick_threshold(
        self,
        eta: float,
        family: Literal["spin", "molecule"] = "spin",
        constant_override: Optional[float] = None,
    ) -> float:
        if eta < 0:
            raise DomainError(f"noise rate must be nonnegative, got {eta!r}")
        if eta == 0:
            return self.settings.noiseless_threshold
        if constant_override is not None:
            return constant_override * eta
        if family == "molecule":
            return self.settings.molecule_threshold_constant * eta
        return self.settings.spin_threshold_constant * eta

    def trial_statistic(self, energies: Sequence[float]) -> float:
        """Mean of the central ceil(10%) of the sorted values; median below 10 values."""
        values = np.sort(np.asarray(energies, dtype=np.float64))
        n = values.shape[0]
        if n == 0:
            raise EmptyInput("no energies to aggregate")
        if n < 10:
            return float(np.median(values))
        count = -(-n // 10)
        start = (n - count) // 2
        return float(np.mean(values[start : start + count]))


krylov_service = KrylovService()
