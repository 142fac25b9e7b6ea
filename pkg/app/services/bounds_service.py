import logging
import math
from typing import Callable, Literal, Optional

import numpy as np
from numpy.polynomial import Chebyshev
from numpy.polynomial import chebyshev as C

from app.errors import DenominatorInvalid, DomainError, KrylovLabError
from app.schemas.bounds import BoundParams, BoundReport, GateCostReport

logger = logging.getLogger(__name__)


def _decay(delta: float, k: int) -> float:
    return (1.0 + delta / 2.0) ** (-2 * (k // 2))


class BoundsService:
    """Closed-form error bounds and resource counts.

    Energies are in normalized units (spectrum inside [-1, 1]). The
    dimension and measurement scalings use unit constants and natural
    logarithms; they are order-of-magnitude advisories only.
    """

    def theorem2_bound(self, p: BoundParams, k: int) -> float:
        if k < 0:
            raise DomainError(f"k must be nonnegative, got {k}")
        denom = p.gamma0 - 2.0 * math.sqrt((k + 1) * p.epsilon)
        if denom <= 0:
            raise DenominatorInvalid(
                f"gamma0={p.gamma0:.4g} does not exceed 2*sqrt((k+1)*epsilon)={p.gamma0 - denom:.4g}"
            )
        numer = math.sqrt(p.delta) * p.eps_total + (1.0 - p.gamma**2 + 4.0 * p.eps_total) * _decay(p.delta, k)
        return p.delta + 8.0 * numer / denom**2

    def lemma2_chi(self, p: BoundParams, s_norm: Optional[float] = None) -> float:
        if p.epsilon <= 0:
            raise DomainError("epsilon must be positive")
        s_norm = p.s_norm if s_norm is None else s_norm
        ratio = (s_norm / p.epsilon) ** p.alpha
        return 3.0 * (2.0 + p.mu_const) * (1.0 + 1.0 / p.rho) * ratio * p.eta_s + p.eta_h

    def noise_bound(self, p: BoundParams, chi: float) -> float:
        return math.pi * p.d**4 * chi

    def combined_bound(self, p: BoundParams, k: int, s_norm: Optional[float] = None) -> float:
        return self.noise_bound(p, self.lemma2_chi(p, s_norm)) + self.theorem2_bound(p, k)

    def residual_poly(self, a: float, b: float, d: int) -> tuple[Callable[[np.ndarray], np.ndarray], float]:
        """Minimax residual polynomial on [a, b] and its sup-norm beta there."""
        if not 0 < a < b:
            raise DomainError(f"need 0 < a < b, got a={a!r}, b={b!r}")
        if d < 1:
            raise DomainError(f"degree must be at least 1, got {d}")
        t_d = Chebyshev.basis(d)
        norm = float(t_d((b + a) / (b - a)))

        def p_star(x):
            return t_d((b + a - 2.0 * np.asarray(x, dtype=np.float64)) / (b - a)) / norm

        return p_star, 1.0 / norm

    def g_bound(self, delta: float, k: int) -> float:
        if not 0 < delta < 0.25:
            raise DomainError(f"coefficient bound holds for 0 < delta < 1/4, got {delta!r}")
        return 2.0 * math.sqrt(delta) + 8.0 * (1.0 - 2.0 / math.pi * math.sqrt(delta)) * _decay(delta, k)

    def chebyshev_coefficients(
        self, f: Callable[[np.ndarray], np.ndarray], degree: int, nodes: Optional[int] = None
    ) -> np.ndarray:
        """Chebyshev expansion coefficients of f by Gauss-Chebyshev quadrature."""
        x, w = C.chebgauss(nodes or 2 * degree + 2)
        coeffs = C.chebvander(x, degree).T @ (w * f(x)) * (2.0 / math.pi)
        coeffs[0] /= 2.0
        return coeffs

    def expansion_weight(self, delta: float, k: int, e0: float) -> float:
        """sum_j c_j^2 for f(x) = p*((x - e0)^2 / 4) built with a = delta^2/4, b = 1, d = k // 2."""
        if k // 2 == 0:
            return 1.0
        p_star, _ = self.residual_poly(delta**2 / 4.0, 1.0, k // 2)
        coeffs = self.chebyshev_coefficients(lambda x: p_star((x - e0) ** 2 / 4.0), k)
        return float(np.sum(coeffs**2))

    def threshold_scale(self, d: int, eta: float, alpha: float) -> float:
        return (d**4 * eta) ** (1.0 / (1.0 + alpha))

    def _check_unit(self, **values: float):
        for name, value in values.items():
            if not 0 < value <= 1:
                raise DomainError(f"{name} must lie in (0, 1], got {value!r}")

    def required_dimension(self, gamma0: float, err: float, gap: float) -> int:
        self._check_unit(gamma0=gamma0, err=err, gap=gap)
        value = (math.log(1.0 / gamma0) + math.log(1.0 / err)) * min(1.0 / err, 1.0 / gap)
        return max(1, math.ceil(value - 1e-9))

    def measurement_budget(self, gamma0: float, err: float, gap: float) -> float:
        self._check_unit(gamma0=gamma0, err=err, gap=gap)
        return (1.0 / err**2 + 1.0 / (err * gamma0**4)) * min(1.0 / err, 1.0 / gap)

    def lemma2_assumptions(
        self,
        p: BoundParams,
        s_mat: np.ndarray,
        h_mat: Optional[np.ndarray] = None,
        energies: Optional[tuple[float, float]] = None,
    ) -> dict[str, bool]:
        """Diagnostic flags for the noise-bound preconditions. Never enforced."""
        evals, evecs = np.linalg.eigh(s_mat)
        order = np.argsort(evals)[::-1]
        evals, evecs = evals[order], evecs[:, order]
        kept = evals > p.epsilon
        m = int(kept.sum())
        chi = self.lemma2_chi(p, float(evals[0]))
        scaled = p.d**4 * chi
        flags = {
            "eig_separation": m == len(evals) or evals[m] + p.eta_s <= p.epsilon,
            "rho_margin": m > 0 and (1.0 + p.rho) * p.epsilon <= evals[m - 1],
            "noise_below_threshold": scaled <= p.epsilon,
        }
        if h_mat is not None:
            positive = evals > 0
            lam = evals[positive]
            vecs = evecs[:, positive]
            coupling = np.abs(vecs.T @ h_mat @ vecs)
            lo = np.minimum.outer(lam, lam)
            hi = np.maximum.outer(lam, lam)
            limit = p.mu_const * lo ** (1.0 - p.alpha) * hi**p.alpha
            flags["h_relative_to_s"] = bool(np.all(coupling <= limit * (1 + 1e-12)))
        if energies is not None:
            e0, e1 = energies
            ratio = scaled / p.epsilon
            flags["gap_condition"] = ratio <= 1 and math.atan(e1) - math.atan(e0) >= math.asin(ratio)
            flags["simplified_gap_condition"] = e1 - e0 >= ratio
        return {name: bool(value) for name, value in flags.items()}

    def bound_report(self, p: BoundParams) -> BoundReport:
        k = p.d - 1
        report = BoundReport(k=k)
        try:
            report.theorem2 = self.theorem2_bound(p, k)
        except KrylovLabError as e:
            report.theorem2_error = e.code
        if p.epsilon > 0:
            report.chi = self.lemma2_chi(p)
            report.noise_bound = self.noise_bound(p, report.chi)
            if report.theorem2 is not None:
                report.combined = report.noise_bound + report.theorem2
        if 0 < p.delta < 0.25:
            report.g_bound = self.g_bound(p.delta, k)
        if p.eta > 0:
            report.threshold_scale = self.threshold_scale(p.d, p.eta, p.alpha)
        if p.target_error is not None and p.gap is not None and p.gap <= 1:
            report.required_dimension = self.required_dimension(p.gamma0, p.target_error, p.gap)
            report.measurement_budget = self.measurement_budget(p.gamma0, p.target_error, p.gap)
        logger.debug(f"[Bounds] D={p.d}: theorem2={report.theorem2}, noise={report.noise_bound}")
        return report

    def gate_costs(
        self, n: int, t: int, scheme: Literal["binary_index", "symplectic"], d: Optional[int] = None
    ) -> GateCostReport:
        if n < 1 or t < 1:
            raise DomainError(f"need n >= 1 and t >= 1, got n={n}, t={t}")
        if d is not None and d < 1:
            raise DomainError(f"Krylov dimension must be at least 1, got {d}")
        if scheme == "binary_index":
            return GateCostReport(
                scheme=scheme,
                n=n,
                t=t,
                u_two_qubit=n * t,
                g_two_qubit=2 * t,
                r_two_qubit=4 * t,
                aux_qubits=(t - 1).bit_length(),
                depth=None if d is None else (d - 1) * n * t + 4 * d * t,
                d=d,
            )
        if scheme == "symplectic":
            if n < 3:
                raise DomainError(f"symplectic encoding counts need n >= 3, got {n}")
            return GateCostReport(
                scheme=scheme,
                n=n,
                t=t,
                u_two_qubit=3 * n + t,
                g_two_qubit=4 * n * n - 10 * n,
                g_single_qubit=2,
                r_two_qubit=8 * n * n + 14,
                r_single_qubit=4,
                aux_qubits=2 * n,
                counting_qubits=6,
                d=d,
            )
        raise DomainError(f"unknown scheme {scheme!r}")


bounds_service = BoundsService()
