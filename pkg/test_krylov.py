import numpy as np
import pytest

from app.errors import AllDiscarded, DomainError, EmptyInput, LengthMismatch
from app.schemas.lattice import LatticeSpec
from app.schemas.moments import MomentSeq
from app.services.krylov_service import assemble_arrays, krylov_service
from app.services.lattice_service import lattice_service
from app.services.moment_service import moment_service
from app.services.pauli_service import pauli_service
from app.services.state_service import state_service


class TestAssemble:
    def test_leading_entries(self):
        m = MomentSeq(d_max=2, mu=(1.0, 0.3, 0.2, -0.1))
        kp = krylov_service.assemble(m)
        s, h = kp.s_array, kp.h_array
        assert s[0, 0] == pytest.approx(1.0)
        assert h[0, 0] == pytest.approx(0.3)
        assert s[0, 1] == pytest.approx(0.3)
        assert h[0, 1] == pytest.approx(0.6)
        assert kp.provenance.noiseless

    def test_symmetric(self):
        mu = np.linspace(1.0, -0.4, 12)
        s, h = assemble_arrays(mu, 6)
        np.testing.assert_array_equal(s, s.T)
        np.testing.assert_array_equal(h, h.T)

    def test_matches_explicit_basis(self, random_sum, rng):
        for n, d in ((3, 6), (4, 12)):
            h = random_sum(n, 2 * n + 1)
            psi = state_service.random_state(n, rng)
            basis = moment_service.explicit_krylov_basis(h, psi, d)
            gram = (basis.conj().T @ basis).real
            projected = (basis.conj().T @ (pauli_service.to_dense(h) @ basis)).real
            s, hm = assemble_arrays(moment_service.compute_moments(h, psi, d).array, d)
            np.testing.assert_allclose(s, gram, atol=1e-10)
            np.testing.assert_allclose(hm, projected, atol=1e-10)

    def test_wrong_length(self):
        with pytest.raises(LengthMismatch):
            assemble_arrays(np.ones(5), 3)

    def test_provenance_carries_noise(self, half_xz):
        m = moment_service.compute_moments(half_xz, state_service.basis_state(1, 0), 3)
        kp = krylov_service.assemble(moment_service.add_noise(m, 1e-3, seed=9))
        assert kp.provenance.eta == 1e-3
        assert kp.provenance.seed == 9
        assert kp.provenance.scale == pytest.approx(half_xz.scale)


class TestSolve:
    def test_single_vector(self):
        kp = krylov_service.assemble(MomentSeq(d_max=1, mu=(1.0, -0.35)))
        report = krylov_service.solve_thresholded(kp, 0.5)
        assert report.energy_normalized == pytest.approx(-0.35)
        assert report.kept == 1
        assert report.second_energy_normalized is None

    def test_matches_generalized_solve(self, random_sum, rng):
        h = random_sum(3, 8)
        psi = state_service.random_state(3, rng)
        kp = krylov_service.assemble(moment_service.compute_moments(h, psi, 4))
        report = krylov_service.solve_thresholded(kp, 1e-13)
        assert report.kept == 4
        assert report.energy_normalized == pytest.approx(krylov_service.solve_unthresholded(kp), abs=1e-9)

    def test_physical_energy_uses_scale(self, lattice_2x2):
        h = lattice_service.build_j1j2(lattice_2x2)
        m = moment_service.compute_moments(h, lattice_service.antiferro_state(2, 2), 3)
        report = krylov_service.solve_thresholded(krylov_service.assemble(m), 1e-13)
        assert report.energy_physical == pytest.approx(report.energy_normalized * h.scale)

    def test_threshold_above_spectrum(self):
        kp = krylov_service.assemble(MomentSeq(d_max=2, mu=(1.0, 0.1, 0.2, 0.0)))
        with pytest.raises(AllDiscarded):
            krylov_service.solve_thresholded(kp, 10.0)

    def test_eigenvalue_at_threshold_is_discarded(self):
        s = np.diag([1.0, 0.5])
        h = np.diag([0.2, 0.3])
        report = krylov_service.solve_arrays(s, h, 0.5)
        assert report.kept == 1
        assert report.discarded_eigs == pytest.approx([0.5])
        assert report.energy_normalized == pytest.approx(0.2)

    def test_nonpositive_threshold(self):
        with pytest.raises(DomainError):
            krylov_service.solve_arrays(np.eye(2), np.eye(2), 0.0)

    def test_discarded_bookkeeping(self, lattice_2x2):
        h = lattice_service.build_j1j2(lattice_2x2)
        m = moment_service.compute_moments(h, lattice_service.antiferro_state(2, 2), 12)
        noisy = moment_service.add_noise(m, 1e-4, seed=2)
        kp = krylov_service.assemble(noisy)
        report = krylov_service.solve_thresholded(kp, krylov_service.pick_threshold(1e-4))
        assert report.kept + len(report.discarded_eigs) == 12
        positive = [max(0.0, value) for value in report.discarded_eigs]
        assert report.eps_total == pytest.approx(sum(positive), abs=1e-12)
        assert all(value <= report.epsilon for value in report.discarded_eigs)

    def test_noiseless_estimates_are_variational(self):
        for spec in (LatticeSpec(rows=2, cols=2), LatticeSpec(rows=2, cols=3)):
            h = lattice_service.build_j1j2(spec)
            e0, _ = lattice_service.ground_truth(h)
            m = moment_service.compute_moments(h, lattice_service.antiferro_state(spec.rows, spec.cols), 12)
            for d in range(1, 13):
                kp = krylov_service.assemble(moment_service.truncate(m, d))
                report = krylov_service.solve_thresholded(kp, 1e-13)
                assert report.energy_normalized >= e0 - 1e-8

    def test_eps_total_ignores_negative_eigenvalues(self):
        s = np.diag([1.0, 1e-3, -3e-17, -2e-16])
        h = np.diag([-0.5, 0.1, 0.0, 0.0])
        report = krylov_service.solve_arrays(s, h, 1e-2)
        assert report.kept == 1
        assert report.eps_total == pytest.approx(1e-3)
        assert len(report.discarded_eigs) == 3

    def test_eps_total_is_nonnegative_on_lattices(self, lattice_2x2):
        h = lattice_service.build_j1j2(lattice_2x2)
        m = moment_service.compute_moments(h, lattice_service.antiferro_state(2, 2), 16)
        for d in range(1, 17):
            report = krylov_service.solve_thresholded(krylov_service.assemble(moment_service.truncate(m, d)), 1e-13)
            assert report.eps_total >= 0

    def test_smaller_threshold_discards_less(self, lattice_2x2):
        h = lattice_service.build_j1j2(lattice_2x2)
        m = moment_service.compute_moments(h, lattice_service.antiferro_state(2, 2), 10)
        kp = krylov_service.assemble(m)
        totals = [krylov_service.solve_thresholded(kp, eps).eps_total for eps in (1e-2, 1e-5, 1e-8, 1e-13)]
        assert totals == sorted(totals, reverse=True)


class TestNoiselessConvergence:
    @pytest.mark.parametrize("rows,cols", [(2, 2), (2, 3)])
    def test_error_per_site_decays_with_monotone_envelope(self, rows, cols):
        spec = LatticeSpec(rows=rows, cols=cols)
        h = lattice_service.build_j1j2(spec)
        e0, _ = lattice_service.ground_truth(h)
        m = moment_service.compute_moments(h, lattice_service.antiferro_state(rows, cols), 20)
        reports = [
            krylov_service.solve_thresholded(krylov_service.assemble(moment_service.truncate(m, d)), 1e-13)
            for d in range(1, 21)
        ]
        errors = [abs(r.energy_normalized - e0) * h.scale / spec.sites for r in reports]
        assert min(errors) < 1e-8
        for before, after in zip(reports, reports[1:]):
            if max(before.kept_condition, after.kept_condition) <= 1e12:
                assert after.energy_normalized <= before.energy_normalized + 1e-8


class TestPickThreshold:
    def test_noiseless(self):
        assert krylov_service.pick_threshold(0.0, "spin") == 1e-13

    def test_spin(self):
        assert krylov_service.pick_threshold(1e-4, "spin") == pytest.approx(3e-3)

    def test_molecule(self):
        assert krylov_service.pick_threshold(1e-4, "molecule") == pytest.approx(5e-3)

    def test_override(self):
        assert krylov_service.pick_threshold(1e-3, "spin", constant_override=7.0) == pytest.approx(7e-3)

    def test_negative(self):
        with pytest.raises(DomainError):
            krylov_service.pick_threshold(-1.0)


class TestTrialStatistic:
    def test_single(self):
        assert krylov_service.trial_statistic([5.0]) == 5.0

    def test_central_decile(self):
        assert krylov_service.trial_statistic(list(range(100, 0, -1))) == pytest.approx(50.5)

    def test_small_samples_use_median(self):
        assert krylov_service.trial_statistic([3.0, -1.0, 100.0]) == 3.0

    def test_robust_to_outliers(self, rng):
        values = np.concatenate([rng.normal(size=100), np.full(5, -1e6)])
        assert -0.5 <= krylov_service.trial_statistic(values) <= 0.5

    def test_empty(self):
        with pytest.raises(EmptyInput):
            krylov_service.trial_statistic([])
