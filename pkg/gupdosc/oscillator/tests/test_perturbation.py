from unittest import mock

import numpy as np
from django.test import SimpleTestCase

from oscillator import config
from oscillator.exceptions import ConvergenceError, CriticalFieldError, DegenerateClusterError, UsageError
from oscillator.fock import FockSpace, ladder_b
from oscillator.model import ModelParams, landau_level, spinor_level, spinor_state
from oscillator.numerics import LAPACK
from oscillator.perturbation import (critical_field, degeneracy_analysis, degenerate_block, degenerate_shift,
                                     exact_oracle, field_scan, first_order_shift, interior_energies,
                                     level_cluster, oracle_slopes, spectrum_by_sector)
from oscillator.perturbation.oracle import state_label
from oscillator.perturbation.replication import printed_block


def c_squared(lam, n, branch=config.PLUS):
    energy = np.sqrt(1 + 4 * lam * n)
    sign = 1 if branch == config.PLUS else -1
    return (energy + sign) / (2 * energy)


class SpectrumTests(SimpleTestCase):
    def test_landau_levels_in_the_interior_spectrum(self):
        space = FockSpace(40)
        for lam in (0.05, 0.1, 0.5):
            params = ModelParams(omega=lam)
            labels = {state_label(space, spinor_state(space, params, spinor_level(params, n))) for n in range(9)}
            energies = interior_energies(
                spectrum_by_sector(space, params, gup_a=0.0, method=LAPACK, labels=labels))
            for n in range(9):
                for branch in config.BRANCHES:
                    if n == 0 and branch == config.MINUS:
                        continue
                    expected = landau_level(params, n, branch)
                    with self.subTest(lam=lam, n=n, branch=branch):
                        self.assertLessEqual(np.min(np.abs(energies - expected)) / abs(expected), 1e-8)

    def test_landau_towers_grow_with_the_cutoff(self):
        params = ModelParams(omega=0.1)
        for cutoff in (20, 24, 28):
            energies = interior_energies(spectrum_by_sector(FockSpace(cutoff), params, gup_a=0.0, method=LAPACK))
            for n in (0, 1, 2):
                count = int(np.sum(np.abs(energies - landau_level(params, n)) <= 1e-9))
                with self.subTest(cutoff=cutoff, n=n):
                    # spectators m with n + m <= cutoff - margin
                    self.assertEqual(count, cutoff - config.INTERIOR_MARGIN - n + 1)

    def test_paired_levels_are_charge_symmetric(self):
        space = FockSpace(10)
        for omega, B in ((0.1, 0.0), (0.1, 0.4)):
            params = ModelParams(omega=omega, B=B)
            energies = interior_energies(spectrum_by_sector(space, params, gup_a=0.0, method=LAPACK))
            unpaired = landau_level(params, 0, config.PLUS if params.omega_tilde > 0 else config.MINUS)
            paired = np.sort(energies[np.abs(energies - unpaired) > 1e-9])
            with self.subTest(omega_tilde=params.omega_tilde):
                self.assertGreater(len(paired), 0)
                np.testing.assert_allclose(paired, -paired[::-1], atol=1e-10 * params.rest_energy)

    def test_jacobi_sectors_agree_with_lapack(self):
        space = FockSpace(8)
        params = ModelParams(omega=0.3, gup_a=1e-3)
        for jacobi, lapack in zip(spectrum_by_sector(space, params), spectrum_by_sector(space, params, method=LAPACK)):
            self.assertEqual(jacobi.label, lapack.label)
            np.testing.assert_allclose(jacobi.eigenvalues, lapack.eigenvalues, atol=1e-10)

    def test_exact_oracle_steps(self):
        space = FockSpace(6)
        params = ModelParams(omega=0.2)
        spectra = exact_oracle(space, params, [0.0, 1e-4])
        self.assertEqual([step for step, _ in spectra], [0.0, 1e-4])
        self.assertLess(np.min(np.abs(spectra[0][1] - 1.0)), 1e-12)
        for steps in ([1e-4], [0.0, 2e-4, 1e-4], [0.0, 0.0]):
            with self.subTest(steps=steps):
                with self.assertRaises(UsageError):
                    exact_oracle(space, params, steps)

    def test_oracle_needs_a_scale(self):
        space = FockSpace(6)
        params = ModelParams(omega=1.0, B=2.0)
        state = spinor_state(space, params, spinor_level(params, 0))
        with self.assertRaises(CriticalFieldError):
            oracle_slopes(space, params, [state])


class FirstOrderShiftTests(SimpleTestCase):
    def setUp(self):
        self.space = FockSpace(10)
        self.params = ModelParams(omega=0.1, gup_a=1e-4)

    def test_ground_state(self):
        report = first_order_shift(self.space, self.params, spinor_level(self.params, 0), oracle=True)
        self.assertAlmostEqual(report.shifts_in_units[0], -1.0, places=12)
        self.assertAlmostEqual(report.shifts[0], -1e-4 * self.params.shift_unit, places=16)
        self.assertEqual(report.paper_value, config.PUBLISHED_GROUND_SHIFT)
        self.assertEqual(report.discrepancy_flags, [])
        self.assertAlmostEqual(report.oracle_slopes[0], -1.0, delta=1e-6)

    def test_first_excited_state(self):
        report = first_order_shift(self.space, self.params, spinor_level(self.params, 1), oracle=True)
        expected = -(1 + c_squared(0.1, 1))
        self.assertAlmostEqual(report.shifts_in_units[0], expected, places=12)
        self.assertAlmostEqual(report.shifts_in_units[0], -1.92257712, places=7)
        self.assertAlmostEqual(report.oracle_slopes[0], expected, delta=1e-6 * abs(expected))
        self.assertEqual(report.paper_value, config.PUBLISHED_FIRST_SHIFT)
        self.assertEqual(len(report.discrepancy_flags), 1)
        self.assertIn('published value', report.discrepancy_flags[0])

    def test_closed_form_on_both_branches(self):
        for n in range(1, 4):
            for branch in config.BRANCHES:
                for spectator in (0, 2):
                    level = spinor_level(self.params, n, branch, n_spectator=spectator)
                    with self.subTest(n=n, branch=branch, spectator=spectator):
                        report = first_order_shift(self.space, self.params, level)
                        expected = -(n + spectator + c_squared(0.1, n, branch))
                        self.assertAlmostEqual(report.shifts_in_units[0], expected, places=11)

    def test_breakdown_adds_up(self):
        report = first_order_shift(self.space, self.params, spinor_level(self.params, 2, n_spectator=1))
        self.assertEqual(set(report.breakdown), {'ladder', 'zzbar', 'lz'})
        self.assertAlmostEqual(sum(report.breakdown.values()), report.shifts_in_units[0], places=11)

    def test_opposite_chirality(self):
        params = ModelParams(omega=0.1, B=0.4, gup_a=1e-4)  # omega_tilde = -0.1
        report = first_order_shift(self.space, params, spinor_level(params, 0, config.MINUS), oracle=True)
        self.assertAlmostEqual(report.shifts_in_units[0], -1.0, places=12)
        self.assertAlmostEqual(report.oracle_slopes[0], -1.0, delta=1e-6)
        self.assertIsNone(report.paper_value)

    def test_shifts_in_units_depend_on_lambda_only(self):
        for mass, light_speed, hbar, omega in ((2.0, 1.0, 1.0, 0.2), (2.0, 3.0, 0.5, 3.6)):
            params = ModelParams(mass=mass, light_speed=light_speed, hbar=hbar, omega=omega, gup_a=1e-4)
            self.assertAlmostEqual(params.lam, 0.1, delta=1e-15)
            for n, spectator in ((0, 0), (1, 0), (2, 1)):
                level = spinor_level(params, n, n_spectator=spectator)
                with self.subTest(mass=mass, light_speed=light_speed, n=n):
                    report = first_order_shift(self.space, params, level)
                    reference = first_order_shift(self.space, self.params, spinor_level(self.params, n,
                                                                                        n_spectator=spectator))
                    self.assertAlmostEqual(report.shifts_in_units[0], reference.shifts_in_units[0], delta=1e-11)
                    self.assertAlmostEqual(report.shifts[0], 1e-4 * params.shift_unit * report.shifts_in_units[0],
                                           delta=1e-12 * abs(report.shifts[0]))

    def test_linear_in_a(self):
        level = spinor_level(self.params, 1)
        single = first_order_shift(self.space, self.params, level)
        double = first_order_shift(self.space, self.params.replace(gup_a=2e-4), level)
        self.assertAlmostEqual(double.shifts[0] / single.shifts[0], 2.0, delta=1e-12)
        self.assertEqual(double.shifts_in_units, single.shifts_in_units)

    def test_critical_field(self):
        params = ModelParams(omega=1.0, B=2.0, gup_a=1e-3)
        report = first_order_shift(self.space, params, spinor_level(params, 1))
        self.assertEqual(report.shifts, [0.0])
        self.assertIsNone(report.shifts_in_units)
        self.assertIsNone(report.breakdown)

    def test_coupled_partners_need_degenerate_theory(self):
        b = ladder_b(self.space)
        operator = b + b.T
        with self.assertRaises(DegenerateClusterError):
            first_order_shift(self.space, self.params, spinor_level(self.params, 0), operator=operator)

    def test_custom_operator(self):
        operator = np.eye(self.space.dim)
        report = first_order_shift(self.space, self.params, spinor_level(self.params, 1), operator=operator)
        self.assertAlmostEqual(report.shifts_in_units[0], 1.0 / self.params.shift_unit)
        self.assertIsNone(report.breakdown)
        with self.assertRaises(UsageError):
            first_order_shift(self.space, self.params, spinor_level(self.params, 1), operator=operator, oracle=True)

    def test_truncation_edge(self):
        with self.assertRaises(UsageError):
            first_order_shift(FockSpace(4), self.params, spinor_level(self.params, 3))


class DegenerateShiftTests(SimpleTestCase):
    def setUp(self):
        self.space = FockSpace(10)
        self.params = ModelParams(omega=0.1, gup_a=1e-4)

    def test_second_level_cluster(self):
        cluster = level_cluster(self.params, 2, size=4)
        report = degenerate_shift(self.space, self.params, cluster, oracle=True)
        expected = sorted(-(2 + m + c_squared(0.1, 2)) for m in range(4))
        np.testing.assert_allclose(report.shifts_in_units, expected, atol=1e-11)
        np.testing.assert_allclose(report.oracle_slopes, expected, rtol=1e-6)
        self.assertEqual(report.discrepancy_flags, [])
        self.assertEqual(report.method, 'degenerate')
        self.assertEqual(len(report.subspace_basis), 4)

    def test_lowest_landau_level_splits(self):
        report = degenerate_shift(self.space, self.params, level_cluster(self.params, 0, size=6))
        np.testing.assert_allclose(report.shifts_in_units, [-6, -5, -4, -3, -2, -1], atol=1e-12)
        self.assertEqual(len(report.subspace_basis), 6)

    def test_cluster_eigenvectors_are_unitary_and_keep_the_trace(self):
        for n, size in ((0, 6), (2, 4), (3, 3)):
            report = degenerate_shift(self.space, self.params, level_cluster(self.params, n, size=size))
            vectors = np.asarray(report.eigenvectors)
            matrix = np.asarray(report.subspace_matrix)
            with self.subTest(n=n):
                np.testing.assert_allclose(vectors.conj().T @ vectors, np.eye(size), atol=1e-10)
                np.testing.assert_allclose(vectors @ vectors.conj().T, np.eye(size), atol=1e-10)
                self.assertAlmostEqual(sum(report.shifts), float(np.trace(matrix).real),
                                       delta=1e-12 * max(1.0, float(np.max(np.abs(matrix)))))
                np.testing.assert_allclose(matrix @ vectors, vectors * np.asarray(report.shifts),
                                           atol=1e-10 * float(np.max(np.abs(matrix))))

    def test_coupled_cluster(self):
        b = ladder_b(self.space)
        report = degenerate_shift(self.space, self.params, level_cluster(self.params, 0, size=2), operator=b + b.T)
        np.testing.assert_allclose(np.asarray(report.shifts_in_units) * self.params.shift_unit, [-1, 1], atol=1e-12)

    def test_not_degenerate(self):
        cluster = [spinor_level(self.params, 1), spinor_level(self.params, 2)]
        with self.assertRaises(UsageError):
            degenerate_shift(self.space, self.params, cluster)
        with self.assertRaises(UsageError):
            degenerate_shift(self.space, self.params, [])

    def test_printed_block(self):
        report = degenerate_block(printed_block())
        np.testing.assert_allclose(report.shifts, config.PUBLISHED_BLOCK_EIGENVALUES, atol=5e-4)
        self.assertAlmostEqual(sum(report.shifts), -22.0, delta=1e-12)
        with self.assertRaises(UsageError):
            degenerate_block([[0, 1], [0, 0]])


class AnalysisTests(SimpleTestCase):
    def test_critical_field(self):
        self.assertEqual(critical_field(ModelParams(omega=1.0)), 2.0)
        self.assertEqual(critical_field(ModelParams(omega=1.0, mass=2.0, charge_mag=4.0)), 1.0)
        self.assertEqual(ModelParams(omega=1.0, B=2.0).omega_tilde, 0.0)

    def test_degeneracy_is_lifted(self):
        space = FockSpace(8)
        analysis = degeneracy_analysis(space, ModelParams(omega=0.1, gup_a=1e-3))
        self.assertEqual(analysis.before.lll_multiplicity, 7)
        self.assertEqual(analysis.after.lll_multiplicity, 1)
        self.assertGreater(max(analysis.before.histogram), max(analysis.after.histogram))

    def test_window_below_noise(self):
        with self.assertRaises(UsageError):
            degeneracy_analysis(FockSpace(4), ModelParams(omega=0.1), energy_window=1e-14)

    def test_field_scan(self):
        space = FockSpace(10)
        scan = field_scan(space, ModelParams(omega=1.0, gup_a=1e-4), [0.0, 1.0, 2.0, 3.0], levels=4)
        self.assertEqual(scan.critical_B, 2.0)
        self.assertEqual([point.chirality for point in scan.points], [1, 1, 0, -1])
        self.assertEqual([point.omega_tilde for point in scan.points], [1.0, 0.5, 0.0, -0.5])
        self.assertEqual(scan.points[1].landau_formula_status, 'ok')
        self.assertEqual(scan.points[3].landau_formula_status, 'branch collapse at n=1')
        for point in scan.points:
            with self.subTest(B=point.B):
                self.assertIsNone(point.error)
                self.assertEqual(len(point.n2_shifts), 4)
        self.assertAlmostEqual(scan.points[1].ground_shift, -1e-4 * 0.5, places=15)

    def test_ground_shift_vanishes_toward_the_critical_field(self):
        space = FockSpace(8)
        params = ModelParams(omega=1.0, gup_a=1e-4)
        scan = field_scan(space, params, [1.0, 1.5, 1.9, 1.99, 1.999], levels=2)
        magnitudes = []
        for point in scan.points:
            with self.subTest(B=point.B):
                self.assertIsNotNone(point.ground_shift)
                bound = params.alpha_gup * abs(point.omega_tilde) * (1 + 1e-6)
                self.assertLessEqual(abs(point.ground_shift), bound)
                magnitudes.append(abs(point.ground_shift))
        self.assertTrue(all(later < earlier for earlier, later in zip(magnitudes, magnitudes[1:])))
        self.assertLess(magnitudes[-1], 1e-7)

    def test_solver_failure_stays_on_its_point(self):
        space = FockSpace(10)
        failure = ConvergenceError('eigh: LAPACK failed: Eigenvalues did not converge', 1.0)
        with mock.patch('oscillator.perturbation.analysis.degeneracy_analysis', side_effect=failure):
            scan = field_scan(space, ModelParams(omega=1.0, gup_a=1e-4), [0.0, 1.0], levels=2)
        self.assertEqual([point.B for point in scan.points], [0.0, 1.0])
        for point in scan.points:
            with self.subTest(B=point.B):
                self.assertTrue(point.error.startswith('ConvergenceError'))
                self.assertIsNotNone(point.ground_shift)

    def test_threaded_scan_matches_sequential(self):
        space = FockSpace(8)
        params = ModelParams(omega=1.0, gup_a=1e-4)
        sequential = field_scan(space, params, [0.0, 0.5, 1.0], levels=2)
        threaded = field_scan(space, params, [0.0, 0.5, 1.0], threads=3, levels=2)
        self.assertEqual([p.ground_shift for p in sequential.points], [p.ground_shift for p in threaded.points])
        self.assertEqual([p.n2_shifts for p in sequential.points], [p.n2_shifts for p in threaded.points])
        self.assertIsNone(sequential.critical_B)

    def test_scan_arguments(self):
        space = FockSpace(6)
        with self.assertRaises(UsageError):
            field_scan(space, ModelParams(), [])
        with self.assertRaises(UsageError):
            field_scan(space, ModelParams(), [1.0, 0.0])
        with self.assertRaises(UsageError):
            field_scan(space, ModelParams(), [0.0], threads=0)
