import numpy as np
from django.test import SimpleTestCase

from oscillator import config
from oscillator.fock import FockSpace
from oscillator.model import ModelParams
from oscillator.perturbation import replicate_paper


class ReplicationTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.report = replicate_paper(FockSpace(12), ModelParams(omega=1.0, B=1.0, gup_a=1e-4))
        cls.rows = {row.key: row for row in cls.report.rows}

    def test_ground_state_matches(self):
        self.assertEqual(self.rows['E0_shift'].status, config.MATCH)
        self.assertAlmostEqual(self.rows['E0_shift'].computed, -1.0, places=12)
        self.assertEqual(self.rows['E0_oracle'].status, config.MATCH)

    def test_known_discrepancies(self):
        for key in ('E1_shift', 'E1_p2_expectation', 'n2_block'):
            with self.subTest(key=key):
                self.assertEqual(self.rows[key].status, config.DISCREPANCY)
                self.assertTrue(self.rows[key].known)
                self.assertTrue(self.rows[key].detail)
        self.assertEqual(self.report.unexpected(), [])

    def test_first_excited_state_own_value_is_oracle_consistent(self):
        # lambda = 1/2: c_1^2 = (sqrt 3 + 1) / (2 sqrt 3)
        c1_squared = (np.sqrt(3) + 1) / (2 * np.sqrt(3))
        self.assertAlmostEqual(self.rows['E1_shift'].computed, -(1 + c1_squared), places=11)
        self.assertEqual(self.rows['E1_shift'].published, -2.5)
        self.assertEqual(self.rows['E1_oracle'].status, config.MATCH)

    def test_published_p2_expectation_is_negative(self):
        row = self.rows['E1_p2_expectation']
        self.assertLess(row.published, 0)
        self.assertGreater(row.computed, 0)
        self.assertIn('negative', row.detail)

    def test_landau_rows(self):
        keys = [key for key in self.rows if key.startswith('E') and key[1].isdigit() and key[2] in '+-']
        self.assertEqual(keys[:3], ['E0+', 'E1+', 'E1-'])
        self.assertEqual(len(keys), 9)
        for key in keys:
            with self.subTest(key=key):
                self.assertEqual(self.rows[key].status, config.MATCH)

    def test_printed_block(self):
        for key in ('printed_block_eigenvalues', 'printed_block_trace', 'printed_eigenvector',
                    'printed_eigenvector_1', 'printed_eigenvector_2', 'printed_eigenvector_3',
                    'printed_eigenvector_4'):
            with self.subTest(key=key):
                self.assertEqual(self.rows[key].status, config.MATCH)
        np.testing.assert_allclose(self.report.blocks['printed_block'][0], [-5.5, 2.5, 2.5, 2.5])
        self.assertEqual(len(self.report.blocks['computed_eigenvalues']), 4)

    def test_computed_block_is_diagonal(self):
        block = np.asarray(self.report.blocks['computed_block'])
        np.testing.assert_allclose(block - np.diag(np.diag(block)), 0, atol=1e-12)

    def test_critical_field(self):
        row = self.rows['critical_field']
        self.assertEqual(row.status, config.MATCH)
        self.assertEqual(row.computed, 2.0)
