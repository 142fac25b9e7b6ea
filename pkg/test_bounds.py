import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.errors import DenominatorInvalid, DomainError
from app.schemas.bounds import BoundParams
from app.services.bounds_service import bounds_service
from app.services.krylov_service import krylov_service
from app.services.lattice_service import lattice_service
from app.services.moment_service import moment_service
from app.services.pauli_service import pauli_service
from app.services.state_service import state_service


def params(**overrides) -> BoundParams:
    base = dict(d=8, gamma0=0.5, gamma=1.0, delta=0.1)
    base.update(overrides)
    return BoundParams(**base)


class TestThresholdErrorBound:
    def test_perfect_overlap_without_threshold(self):
        assert bounds_service.theorem2_bound(params(gamma0=1.0), 5) == pytest.approx(0.1)

    def test_non_increasing_in_k(self):
        p = params(gamma=0.8, epsilon=1e-6, eps_total=1e-5)
        values = [bounds_service.theorem2_bound(p, k) for k in range(0, 40, 2)]
        assert all(b <= a for a, b in zip(values, values[1:]))

    def test_non_decreasing_in_discarded_weight(self):
        low = bounds_service.theorem2_bound(params(gamma=0.9, eps_total=1e-6), 6)
        high = bounds_service.theorem2_bound(params(gamma=0.9, eps_total=1e-3), 6)
        assert high >= low

    def test_vacuous_denominator(self):
        with pytest.raises(DenominatorInvalid):
            bounds_service.theorem2_bound(params(gamma0=0.1, epsilon=0.01), 3)

    def test_overlaps_validated(self):
        with pytest.raises(ValidationError):
            BoundParams(d=2, gamma0=0.9, gamma=0.5, delta=0.1)

    def test_dominates_lattice_error(self, lattice_2x2):
        h = lattice_service.build_j1j2(lattice_2x2)
        psi = lattice_service.antiferro_state(2, 2)
        summary = lattice_service.spectrum_summary(h, psi)
        m = moment_service.compute_moments(h, psi, 8)
        report = krylov_service.solve_thresholded(krylov_service.assemble(m), 1e-13)
        error = abs(report.energy_normalized - summary.e0)
        p = BoundParams(
            d=8,
            gamma0=summary.overlap,
            gamma=summary.overlap,
            delta=summary.gap,
            epsilon=1e-13,
            eps_total=report.eps_total,
        )
        assert error <= bounds_service.theorem2_bound(p, 7)

    def test_dominates_random_instances(self, random_sum, rng):
        checked = 0
        for _ in range(1000):
            if checked == 200:
                break
            n = int(rng.integers(2, 5))
            h = random_sum(n, int(rng.integers(3, 2 * n + 3)))
            psi = state_service.random_state(n, rng)
            evals, evecs = np.linalg.eigh(pauli_service.to_dense(h))
            gap = evals[1] - evals[0]
            gamma0 = abs(np.vdot(evecs[:, 0], psi.amps))
            if gap < 1e-6 or gamma0 < 1e-3:
                continue
            d = int(rng.integers(2, 9))
            m = moment_service.compute_moments(h, psi, d)
            report = krylov_service.solve_thresholded(krylov_service.assemble(m), 1e-13)
            p = BoundParams(d=d, gamma0=gamma0, gamma=gamma0, delta=gap, epsilon=1e-13, eps_total=report.eps_total)
            assert abs(report.energy_normalized - evals[0]) <= bounds_service.theorem2_bound(p, d - 1)
            checked += 1
        assert checked == 200


class TestNoiseBound:
    def test_reference_value(self):
        p = params(alpha=0.5, epsilon=0.04, eta_s=1e-4, eta_h=1e-4)
        chi = bounds_service.lemma2_chi(p, 1.0)
        assert chi == pytest.approx(9.1e-3)
        assert bounds_service.noise_bound(p, chi) == pytest.approx(math.pi * 8**4 * 9.1e-3)

    def test_noiseless(self):
        p = params(epsilon=0.01)
        assert bounds_service.lemma2_chi(p, 3.0) == 0.0
        assert bounds_service.noise_bound(p, 0.0) == 0.0

    def test_alpha_zero_ignores_ratio(self):
        p = params(alpha=0.0, epsilon=1e-3, eta_s=1e-4)
        assert bounds_service.lemma2_chi(p, 1.0) == pytest.approx(bounds_service.lemma2_chi(p, 50.0))

    def test_requires_threshold(self):
        with pytest.raises(DomainError):
            bounds_service.lemma2_chi(params(), 1.0)

    def test_combined(self):
        p = params(epsilon=0.04, eta_s=1e-4, eta_h=1e-4, gamma0=1.0)
        assert bounds_service.combined_bound(p, 3) == pytest.approx(
            bounds_service.noise_bound(p, bounds_service.lemma2_chi(p)) + bounds_service.theorem2_bound(p, 3)
        )


class TestResidualPoly:
    def test_linear_case(self):
        p_star, beta = bounds_service.residual_poly(1.0, 3.0, 1)
        assert beta == pytest.approx(0.5)
        assert p_star(0.0) == pytest.approx(1.0)

    def test_grid_maximum(self):
        p_star, beta = bounds_service.residual_poly(0.01, 1.0, 20)
        grid = np.linspace(0.01, 1.0, 10_000)
        assert np.max(np.abs(p_star(grid))) == pytest.approx(beta, abs=1e-8)
        assert beta <= 2 * 1.1**-20

    def test_random_parameters(self, rng):
        for _ in range(50):
            a, b = np.sort(rng.uniform(1e-3, 2.0, size=2))
            d = int(rng.integers(1, 30))
            p_star, beta = bounds_service.residual_poly(a, b, d)
            assert p_star(0.0) == pytest.approx(1.0)
            inside = np.linspace(a, b, 2001)
            assert np.max(np.abs(p_star(inside))) == pytest.approx(beta, abs=1e-8)
            assert beta <= 2 * (1 + math.sqrt(a / b)) ** (-d) + 1e-12
            assert np.max(np.abs(p_star(np.linspace(0.0, b, 2001)))) <= 1 + 1e-8

    def test_domain(self):
        with pytest.raises(DomainError):
            bounds_service.residual_poly(2.0, 1.0, 3)
        with pytest.raises(DomainError):
            bounds_service.residual_poly(0.0, 1.0, 3)
        with pytest.raises(DomainError):
            bounds_service.residual_poly(0.1, 1.0, 0)


class TestCoefficientBound:
    def test_limits(self):
        assert bounds_service.g_bound(1e-12, 0) == pytest.approx(8.0, rel=1e-5)
        assert bounds_service.g_bound(0.04, 10_000) == pytest.approx(2 * math.sqrt(0.04))

    def test_validity_window(self):
        with pytest.raises(DomainError):
            bounds_service.g_bound(0.25, 4)

    def test_dominates_expansion_weight(self):
        for delta in (0.01, 0.05, 0.2):
            for k in (2, 5, 10, 30):
                for e0 in (-1.0, -0.9, 0.0, 0.5):
                    assert bounds_service.expansion_weight(delta, k, e0) <= bounds_service.g_bound(delta, k)

    def test_quadrature_recovers_polynomial(self):
        coeffs = bounds_service.chebyshev_coefficients(lambda x: 2 * x**2 - 1 + 0.5 * x, 4)
        np.testing.assert_allclose(coeffs, [0, 0.5, 1, 0, 0], atol=1e-12)


class TestScalings:
    def test_trivial_dimension(self):
        assert bounds_service.required_dimension(1.0, math.exp(-1), 1.0) == 1

    def test_reference_dimension(self):
        expected = math.ceil((math.log(1 / 0.179) + math.log(1e3)) * 1e2)
        assert bounds_service.required_dimension(0.179, 1e-3, 1e-2) == expected

    def test_dimension_grows_as_error_halves(self):
        assert bounds_service.required_dimension(0.5, 0.05, 0.5) > bounds_service.required_dimension(0.5, 0.1, 0.5)

    def test_budget(self):
        assert bounds_service.measurement_budget(1.0, 0.5, 1.0) == pytest.approx((4 + 2) * 1.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            bounds_service.required_dimension(0.0, 0.1, 0.1)
        with pytest.raises(DomainError):
            bounds_service.measurement_budget(0.5, 1.5, 0.1)


class TestGateCosts:
    def test_binary_index(self):
        report = bounds_service.gate_costs(4, 10, "binary_index", d=5)
        assert (report.u_two_qubit, report.g_two_qubit, report.r_two_qubit) == (40, 20, 40)
        assert report.depth == 360

    def test_symplectic(self):
        report = bounds_service.gate_costs(4, 10, "symplectic")
        assert report.u_two_qubit == 22
        assert (report.g_two_qubit, report.g_single_qubit) == (24, 2)
        assert (report.r_two_qubit, report.r_single_qubit) == (142, 4)
        assert report.aux_qubits == 8
        assert report.counting_qubits == 6

    def test_symplectic_three_qubits(self):
        assert bounds_service.gate_costs(3, 5, "symplectic").g_two_qubit == 6

    def test_symplectic_needs_three_qubits(self):
        with pytest.raises(DomainError):
            bounds_service.gate_costs(2, 5, "symplectic")

    def test_closed_forms_over_grid(self):
        for n in (1, 3, 7, 64):
            for t in (1, 17, 10_000):
                for d in (1, 6):
                    report = bounds_service.gate_costs(n, t, "binary_index", d=d)
                    assert report.depth == (d - 1) * n * t + 4 * d * t
                    if n >= 3:
                        report = bounds_service.gate_costs(n, t, "symplectic")
                        assert report.u_two_qubit == 3 * n + t
                        assert report.r_two_qubit == 8 * n * n + 14


class TestReport:
    def test_fields_follow_inputs(self):
        report = bounds_service.bound_report(
            params(d=6, gamma0=1.0, epsilon=0.04, eta=1e-3, eta_s=1e-4, eta_h=1e-4, gap=0.1, target_error=0.01)
        )
        assert report.k == 5
        assert report.theorem2 is not None
        assert report.chi == pytest.approx(9.1e-3)
        assert report.combined == pytest.approx(report.noise_bound + report.theorem2)
        assert report.g_bound is not None
        assert report.required_dimension >= 1

    def test_vacuous_bound_is_reported(self):
        report = bounds_service.bound_report(params(gamma0=0.1, epsilon=0.04))
        assert report.theorem2 is None
        assert report.theorem2_error == "DENOMINATOR_INVALID"
        assert report.combined is None

    def test_assumption_flags(self, lattice_2x2):
        h = lattice_service.build_j1j2(lattice_2x2)
        m = moment_service.compute_moments(h, lattice_service.antiferro_state(2, 2), 6)
        kp = krylov_service.assemble(m)
        flags = bounds_service.lemma2_assumptions(
            params(d=6, epsilon=1e-3, eta_s=1e-8, eta_h=1e-8), kp.s_array, kp.h_array, (-0.9, -0.5)
        )
        assert set(flags) == {
            "eig_separation",
            "rho_margin",
            "noise_below_threshold",
            "h_relative_to_s",
            "gap_condition",
            "simplified_gap_condition",
        }
        assert all(isinstance(value, bool) for value in flags.values())
