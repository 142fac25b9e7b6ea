import logging
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from app.config import get_settings
from app.errors import ConvergenceFailure, SizeGuard
from app.schemas.lattice import LatticeSpec, ModelSummary, SpectrumSummary
from app.schemas.pauli import PauliSum, PauliTerm
from app.schemas.state import StateVec
from app.services.pauli_service import pauli_service
from app.services.state_service import PauliOperator, state_service

logger = logging.getLogger(__name__)

# levels closer than this to E0 count as degenerate with the ground state
DEGENERACY_TOL = 1e-8


class LatticeService:
    """J1-J2 square-lattice builders and exact ground-state oracles.

    Sites are numbered row-major, site (r, c) -> r * cols + c, and site s
    is qubit s.
    """

    def __init__(self):
        self.settings = get_settings()

    def _check_size(self, sites: int):
        if sites > self.settings.max_sites:
            raise SizeGuard(f"{sites} sites exceeds limit {self.settings.max_sites}")

    def lattice_pairs(self, spec: LatticeSpec) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
        periodic = spec.boundary == "periodic"

        def site(r: int, c: int) -> Optional[int]:
            if periodic:
                return (r % spec.rows) * spec.cols + (c % spec.cols)
            if 0 <= r < spec.rows and 0 <= c < spec.cols:
                return r * spec.cols + c
            return None

        def collect(offsets):
            seen = set()
            pairs = []
            for r in range(spec.rows):
                for c in range(spec.cols):
                    i = r * spec.cols + c
                    for dr, dc in offsets:
                        j = site(r + dr, c + dc)
                        if j is None or j == i:
                            continue
                        key = (min(i, j), max(i, j))
                        if key not in seen:
                            seen.add(key)
                            pairs.append(key)
            return pairs

        nn = collect([(0, 1), (1, 0)])
        nnn = collect([(1, 1), (1, -1)])
        nn_set = set(nn)
        return nn, [p for p in nnn if p not in nn_set]

    def build_j1j2(self, spec: LatticeSpec) -> PauliSum:
        self._check_size(spec.sites)
        n = spec.sites
        nn, nnn = self.lattice_pairs(spec)
        raw_terms = []
        for coupling, pairs in ((spec.j1, nn), (spec.j2, nnn)):
            if coupling == 0.0:
                continue
            for i, j in pairs:
                for x, z in ((1, 0), (1, 1), (0, 1)):
                    x_bits = [0] * n
                    z_bits = [0] * n
                    x_bits[i] = x_bits[j] = x
                    z_bits[i] = z_bits[j] = z
                    raw_terms.append(
                        (0.25 * coupling, PauliTerm(x_bits=tuple(x_bits), z_bits=tuple(z_bits)))
                    )
        h = pauli_service.normalize(raw_terms)
        logger.info(
            f"[Lattice] {spec.label} {spec.boundary}: {len(nn)} NN + {len(nnn)} NNN couplings, "
            f"{h.n_terms} terms"
        )
        return h

    def antiferro_state(self, rows: int, cols: int) -> StateVec:
        n = rows * cols
        self._check_size(n)
        index = 0
        for r in range(rows):
            for c in range(cols):
                if (r + c) % 2:
                    index |= 1 << (n - 1 - (r * cols + c))
        return state_service.basis_state(n, index)

    def _lowest(self, h: PauliSum, k: int) -> tuple[np.ndarray, np.ndarray, str]:
        self._check_size(h.n_qubits)
        if h.n_qubits <= self.settings.dense_max_qubits:
            evals, evecs = scipy.linalg.eigh(pauli_service.to_dense(h))
            return evals[:k], evecs[:, :k], "dense"
        op = PauliOperator(h)
        dtype = np.float64 if op.is_real else np.complex128
        if op.is_real:
            matvec = lambda v: op.apply(v).real
        else:
            matvec = op.apply
        linop = LinearOperator((op.dim, op.dim), matvec=matvec, dtype=dtype)
        v0 = np.random.default_rng(0).normal(size=op.dim).astype(dtype)
        logger.info(f"[Lattice] eigsh on {op.dim} amplitudes, {op.n_groups} flip groups")
        try:
            evals, evecs = eigsh(
                linop,
                k=k,
                which="SA",
                tol=0,
                v0=v0,
                maxiter=self.settings.eigsh_maxiter,
                ncv=min(max(self.settings.eigsh_ncv, 2 * k + 1), op.dim - 1),
            )
        except ArpackNoConvergence as e:
            raise ConvergenceFailure(f"eigsh did not converge: {e}")
        order = np.argsort(evals)
        return evals[order], evecs[:, order], "iterative"

    def ground_truth(self, h: PauliSum) -> tuple[float, StateVec]:
        evals, evecs, method = self._lowest(h, 1)
        e0 = float(evals[0])
        state = StateVec(n_qubits=h.n_qubits, amps=evecs[:, 0])
        residual = float(np.linalg.norm(PauliOperator(h).apply(state.amps) - e0 * state.amps))
        if residual > self.settings.residual_tol:
            raise ConvergenceFailure(
                f"ground state residual {residual:.3e} exceeds {self.settings.residual_tol:.1e}"
            )
        logger.debug(f"[Lattice] E0={e0:.15g} via {method}, residual={residual:.2e}")
        return e0, state

    def spectrum_summary(
        self, h: PauliSum, psi0: StateVec, delta: Optional[float] = None, levels: int = 6
    ) -> SpectrumSummary:
        dense = h.n_qubits <= self.settings.dense_max_qubits
        evals, evecs, method = self._lowest(h, 1 << h.n_qubits if dense else levels)
        weights = np.abs(evecs.conj().T @ psi0.amps) ** 2
        e0 = float(evals[0])
        ground = evals - e0 <= DEGENERACY_TOL
        excited = evals[~ground]
        e1 = float(excited[0]) if excited.size else None
        window_overlap = None
        if delta is not None and (method == "dense" or evals[-1] - e0 > delta):
            window_overlap = float(np.sqrt(weights[evals - e0 <= delta].sum()))
        return SpectrumSummary(
            e0=e0,
            e1=e1,
            gap=None if e1 is None else e1 - e0,
            overlap=float(np.sqrt(weights[ground].sum())),
            window_overlap=window_overlap,
            method=method,
        )

    def summarize(self, h: PauliSum, psi0: StateVec, label: str, sites: int) -> ModelSummary:
        spectrum = self.spectrum_summary(h, psi0)
        return ModelSummary(
            label=label,
            n_qubits=h.n_qubits,
            n_terms=h.n_terms,
            scale=h.scale,
            ground_energy=spectrum.e0,
            ground_energy_physical=spectrum.e0 * h.scale,
            ground_energy_per_site=spectrum.e0 * h.scale / sites,
            initial_overlap=spectrum.overlap,
            gap=spectrum.gap,
            ground_method=spectrum.method,
        )


lattice_service = LatticeService()
