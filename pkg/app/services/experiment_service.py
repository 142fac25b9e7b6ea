import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Union

import numpy as np

from app.cache import MomentStore, get_moment_store
from app.config import get_settings
from app.errors import DomainError, KrylovLabError
from app.schemas.experiment import BasisIndex, ExperimentConfig, Fig2Result, MomentsRequest
from app.schemas.lattice import LatticeSpec, ModelSummary
from app.schemas.moments import MomentSeq
from app.schemas.pauli import PauliSum
from app.schemas.state import StateVec
from app.services.krylov_service import assemble_arrays, krylov_service
from app.services.lattice_service import lattice_service
from app.services.moment_service import moment_service
from app.services.pauli_service import pauli_service
from app.services.state_service import state_service

logger = logging.getLogger(__name__)

FIG2_COLUMNS = ["lattice", "D", "eta", "threshold", "error_per_site", "kept_dim", "error_code"]
SMOOTHED_COLUMNS = ["lattice", "eta", "D_center", "smoothed_error_per_site"]
FIG3_COLUMNS = ["lattice", "eta", "depth", "error_per_site", "total_queries", "error_code"]
SMOOTHING_WINDOW = 10


def fmt(value: float) -> str:
    if math.isnan(value):
        return "NaN"
    return format(value, ".17g")


def _to_csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


class Problem:
    """A resolved model: Hamiltonian, initial state, exact ground energy."""

    def __init__(self, h: PauliSum, psi0: StateVec, label: str, sites: int, key: str, state_key: str):
        self.h = h
        self.psi0 = psi0
        self.label = label
        self.sites = sites
        self.key = key
        self.state_key = state_key
        self._e0: Optional[float] = None

    @property
    def e0(self) -> float:
        if self._e0 is None:
            self._e0, _ = lattice_service.ground_truth(self.h)
        return self._e0

    def error_per_site(self, energy: float) -> float:
        return abs(energy - self.e0) * self.h.scale / self.sites


class ExperimentService:
    def __init__(self):
        self.settings = get_settings()

    def resolve(
        self,
        model: Union[LatticeSpec, str],
        initial_state: Union[str, BasisIndex] = "antiferro",
    ) -> Problem:
        if isinstance(model, LatticeSpec):
            h = lattice_service.build_j1j2(model)
            label, sites, key = model.label, model.sites, model.model_dump_json()
        else:
            h = pauli_service.load_hamiltonian_file(model)
            label, sites, key = Path(model).stem, h.n_qubits, h.model_dump_json()
        if isinstance(initial_state, BasisIndex):
            psi0 = state_service.basis_state(h.n_qubits, initial_state.basis_index)
            state_key = initial_state.model_dump_json()
        elif isinstance(model, LatticeSpec):
            psi0 = lattice_service.antiferro_state(model.rows, model.cols)
            state_key = "antiferro"
        else:
            raise DomainError("the antiferromagnetic initial state needs a lattice model")
        return Problem(h, psi0, label, sites, key, state_key)

    def noiseless_moments(self, problem: Problem, d: int, use_cache: bool = True) -> MomentSeq:
        store: MomentStore = get_moment_store()
        key = MomentStore.key(problem.key, problem.state_key, d)
        if use_cache:
            cached = store.get(key)
            if cached is not None:
                logger.info(f"[Sweep] {problem.label}: moments for D={d} from cache")
                return cached
        moments = moment_service.compute_moments(problem.h, problem.psi0, d)
        if use_cache:
            store.put(key, moments)
        return moments

    def run_moments(self, req: MomentsRequest) -> MomentSeq:
        problem = self.resolve(req.model, req.initial_state)
        moments = self.noiseless_moments(problem, req.d_max)
        if req.eta > 0:
            moments = moment_service.add_noise(moments, req.eta, req.seed)
        return moments

    def model_summary(
        self, model: Union[LatticeSpec, str], initial_state: Union[str, BasisIndex] = "antiferro"
    ) -> ModelSummary:
        problem = self.resolve(model, initial_state)
        return lattice_service.summarize(problem.h, problem.psi0, problem.label, problem.sites)

    def _grid_point(
        self,
        problem: Problem,
        moments: MomentSeq,
        cfg: ExperimentConfig,
        eta_idx: int,
        eta: float,
        d: int,
    ) -> dict:
        epsilon = krylov_service.pick_threshold(eta, cfg.threshold_family, cfg.threshold_constant_override)
        prefix = moment_service.truncate(moments, d)
        energies, kept, codes = [], [], []
        # noiseless replicas are identical, one solve suffices
        for trial in range(cfg.trials if eta > 0 else 1):
            noisy = moment_service.add_noise(prefix, eta, cfg.seed, (eta_idx, d, trial))
            try:
                s_mat, h_mat = assemble_arrays(noisy.array, d)
                report = krylov_service.solve_arrays(s_mat, h_mat, epsilon, problem.h.scale)
            except KrylovLabError as e:
                codes.append(e.code)
                continue
            energies.append(report.energy_normalized)
            kept.append(report.kept)
        row = {
            "lattice": problem.label,
            "D": d,
            "eta": fmt(eta),
            "threshold": fmt(epsilon),
            "error_per_site": fmt(float("nan")),
            "kept_dim": "",
            "error_code": "",
        }
        if not energies:
            row["error_code"] = codes[0]
            return row
        if codes:
            logger.debug(f"[Sweep] {problem.label} D={d} eta={eta:g}: {len(codes)} failed trial(s)")
        energy = krylov_service.trial_statistic(energies)
        row["error_per_site"] = fmt(problem.error_per_site(energy))
        row["kept_dim"] = int(np.median(kept))
        return row

    def _run_grid(self, tasks: list, workers: Optional[int]) -> list[dict]:
        workers = workers or self.settings.workers
        if workers <= 1:
            return [self._grid_point(*task) for task in tasks]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda task: self._grid_point(*task), tasks))

    def fig2_rows(self, cfg: ExperimentConfig, workers: Optional[int] = None) -> list[dict]:
        problem = self.resolve(cfg.model, cfg.initial_state)
        moments = self.noiseless_moments(problem, cfg.d_max, cfg.cache)
        logger.info(f"[Sweep] {problem.label}: E0={problem.e0:.12g} (normalized)")
        logger.info(
            f"[Sweep] fig2 {problem.label}: D=1..{cfg.d_max}, {len(cfg.noise_rates)} noise rate(s), "
            f"{cfg.trials} trials"
        )
        tasks = [
            (problem, moments, cfg, eta_idx, eta, d)
            for eta_idx, eta in enumerate(cfg.noise_rates)
            for d in range(1, cfg.d_max + 1)
        ]
        rows = self._run_grid(tasks, workers)
        window = cfg.converged_window
        for eta in cfg.noise_rates:
            tail = [float(r["error_per_site"]) for r in rows if r["eta"] == fmt(eta)][-window:]
            finite = [v for v in tail if not math.isnan(v)]
            if finite:
                logger.info(f"[Sweep] {problem.label} eta={eta:g}: converged error/site {np.mean(finite):.3e}")
        return rows

    def smooth(self, rows: list[dict]) -> list[dict]:
        """Mean over each run of SMOOTHING_WINDOW consecutive dimensions, per (lattice, eta)."""
        series: dict[tuple[str, str], list[dict]] = {}
        for row in rows:
            series.setdefault((row["lattice"], row["eta"]), []).append(row)
        smoothed = []
        for (label, eta), points in series.items():
            dims = np.array([p["D"] for p in points], dtype=np.float64)
            errors = np.array([float(p["error_per_site"]) for p in points])
            for start in range(len(points) - SMOOTHING_WINDOW + 1):
                chunk = errors[start : start + SMOOTHING_WINDOW]
                finite = chunk[~np.isnan(chunk)]
                smoothed.append(
                    {
                        "lattice": label,
                        "eta": eta,
                        "D_center": fmt(float(dims[start : start + SMOOTHING_WINDOW].mean())),
                        "smoothed_error_per_site": fmt(float(finite.mean()) if finite.size else float("nan")),
                    }
                )
        return smoothed

    def run_fig2(self, cfg: ExperimentConfig, workers: Optional[int] = None) -> Fig2Result:
        rows = self.fig2_rows(cfg, workers)
        result = Fig2Result(
            csv=_to_csv(FIG2_COLUMNS, rows),
            smoothed_csv=_to_csv(SMOOTHED_COLUMNS, self.smooth(rows)),
        )
        if cfg.output:
            out = Path(cfg.output)
            out.write_text(result.csv)
            out.with_name(f"{out.stem}_smoothed.csv").write_text(result.smoothed_csv)
            logger.info(f"[Sweep] wrote {out} and {out.stem}_smoothed.csv")
        return result

    def run_fig3(self, cfg: ExperimentConfig, workers: Optional[int] = None) -> str:
        if cfg.lattices:
            models = list(cfg.lattices)
        else:
            models = [cfg.model]
        window = cfg.converged_window
        tasks, layout = [], []
        for model in models:
            problem = self.resolve(model, cfg.initial_state)
            depth = cfg.depth_for(problem.label)
            # converged error comes from the rightmost window of the sweep; depth only prices queries
            d_end = max(cfg.d_max, depth + window - 1)
            moments = self.noiseless_moments(problem, d_end, cfg.cache)
            logger.info(
                f"[Sweep] {problem.label}: E0={problem.e0:.12g}, depth {depth}, window D={d_end - window + 1}..{d_end}"
            )
            for eta_idx, eta in enumerate(cfg.noise_rates):
                layout.append((problem, eta, depth))
                tasks.extend(
                    (problem, moments, cfg, eta_idx, eta, d) for d in range(d_end - window + 1, d_end + 1)
                )
        logger.info(f"[Sweep] fig3: {len(layout)} (lattice, eta) pairs, window {window}")
        points = self._run_grid(tasks, workers)
        rows = []
        for i, (problem, eta, depth) in enumerate(layout):
            chunk = points[i * window : (i + 1) * window]
            errors = [float(p["error_per_site"]) for p in chunk]
            finite = [v for v in errors if not math.isnan(v)]
            codes = [p["error_code"] for p in chunk if p["error_code"]]
            shots = math.inf if eta == 0 else 1.0 / eta**2
            rows.append(
                {
                    "lattice": problem.label,
                    "eta": fmt(eta),
                    "depth": depth,
                    "error_per_site": fmt(float(np.mean(finite)) if finite else float("nan")),
                    "total_queries": fmt(depth * 2 * depth * shots),
                    "error_code": "" if finite else codes[0],
                }
            )
        text = _to_csv(FIG3_COLUMNS, rows)
        if cfg.output:
            Path(cfg.output).write_text(text)
            logger.info(f"[Sweep] wrote {cfg.output}")
        return text


experiment_service = ExperimentService()
