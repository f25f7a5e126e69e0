import csv
import io
import json
import tempfile
from pathlib import Path
from unittest import mock

import numpy as np
from django.core.management import CommandError, call_command
from django.test import SimpleTestCase, override_settings
from openpyxl import load_workbook
from scipy import constants

from oscillator import config
from oscillator.cli.config import parse_config
from oscillator.cli.runner import get_scan_threads
from oscillator.cli.table.tabler import (Table, format_cell, format_json_float, get_csv_report, get_json_report,
                                         to_jsonable)
from oscillator.exceptions import ConvergenceError, UsageError


def run_command(*argv):
    out = io.StringIO()
    call_command(*argv, stdout=out)
    return out.getvalue()


class ParseConfigTests(SimpleTestCase):
    def setUp(self):
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.directory = Path(directory.name)

    def write_config(self, values) -> str:
        path = self.directory / 'run.json'
        path.write_text(json.dumps(values), encoding='utf-8')
        return str(path)

    def test_defaults_and_derived_frequency(self):
        run = parse_config(['spectrum', '--omega', '1', '--B', '1', '--levels', '5'])
        self.assertEqual(run.params.omega_tilde, 0.5)
        self.assertEqual(run.cutoff, config.DEFAULT_CUTOFF)
        self.assertEqual(run.branch, config.PLUS)
        self.assertEqual(run.format, config.TEXT)
        self.assertEqual(run.tolerances, config.TOLERANCES)

    def test_flags_override_the_file(self):
        path = self.write_config({'cutoff': 30, 'omega': 0.5})
        self.assertEqual(parse_config(['spectrum', '--config', path, '--cutoff', '50']).cutoff, 50)
        self.assertEqual(parse_config(['spectrum', '--config', path]).cutoff, 30)
        self.assertEqual(parse_config(['spectrum'], config_file=path).omega, 0.5)

    def test_headroom_rule(self):
        with self.assertRaises(UsageError) as caught:
            parse_config(['spectrum', '--levels', '40', '--cutoff', '20'])
        self.assertIn('--cutoff 44', str(caught.exception))
        with self.assertRaises(UsageError):
            parse_config(['degenerate', '--cutoff', '7', '--levels', '2'])
        parse_config(['degenerate', '--cutoff', '8', '--levels', '2'])

    def test_bad_input(self):
        for argv in (['spectrum', '--cutoff', 'many'], ['spectrum', '--colour', 'red'], ['spectrum', '--omega', 'nan'],
                     ['spectrum', '--branch', 'up'], ['spectrum', '--gup-a', '-1'], ['fit'], [],
                     ['spectrum', '--mass', '0']):
            with self.subTest(argv=argv):
                with self.assertRaises(UsageError):
                    parse_config(argv)

    def test_config_file_errors(self):
        for values in ({'cutof': 10}, {'command': 'scan'}, {'cutoff': 10.5}, {'tolerances': {'speed': 1}},
                       {'tolerances': {'oracle_rtol': -1}}, {'format': 'pdf'}):
            with self.subTest(values=values):
                with self.assertRaises(UsageError):
                    parse_config(['spectrum', '--config', self.write_config(values)])
        with self.assertRaises(UsageError):
            parse_config(['spectrum', '--config', str(self.directory / 'missing.json')])

    def test_tolerance_overrides(self):
        run = parse_config(['correct', '--tol', 'oracle_rtol=1e-5', '--tol', 'match_atol=1e-8'])
        self.assertEqual(run.tolerances['oracle_rtol'], 1e-5)
        self.assertEqual(run.tolerances['match_atol'], 1e-8)
        self.assertEqual(run.tolerances['spectrum_rtol'], 1e-8)
        for value in ('oracle_rtol', 'oracle_rtol=fast', 'speed=1'):
            with self.subTest(value=value):
                with self.assertRaises(UsageError):
                    parse_config(['correct', '--tol', value])

    def test_scan_range(self):
        run = parse_config(['scan', '--omega', '1', '--B-min', '0', '--B-max', '3', '--steps', '4'])
        self.assertEqual(run.B_values(), [0.0, 1.0, 2.0, 3.0])
        for argv in (['scan'], ['scan', '--B-min', '0', '--B-max', '3', '--steps', '1'],
                     ['scan', '--B-min', '3', '--B-max', '0', '--steps', '4']):
            with self.subTest(argv=argv):
                with self.assertRaises(UsageError):
                    parse_config(argv)

    def test_xlsx_needs_an_output_file(self):
        with self.assertRaises(UsageError):
            parse_config(['spectrum', '--format', 'xlsx'])

    def test_si_units(self):
        mc2 = constants.m_e * constants.c ** 2
        B_unit = (constants.m_e * constants.c) ** 2 / (constants.hbar * constants.e)
        run = parse_config(['spectrum', '--units', 'si', '--omega', repr(0.2 * mc2 / constants.hbar),
                            '--B', repr(0.1 * B_unit), '--gup-a', repr(1e-3 / (constants.m_e * constants.c))])
        self.assertEqual(run.mass, constants.m_e)
        self.assertAlmostEqual(run.params.omega, 0.2, places=12)
        self.assertAlmostEqual(run.params.B, 0.1, places=12)
        self.assertAlmostEqual(run.params.omega_tilde, 0.15, places=12)
        self.assertAlmostEqual(run.params.gup_a, 1e-3, places=15)
        self.assertEqual(run.params.rest_energy, 1.0)

    def test_echoed_config_is_a_valid_config_file(self):
        run = parse_config(['degenerate', '--omega', '0.1', '--gup-a', '1e-4', '--cutoff', '8', '--levels', '2',
                            '--branch', 'both', '--tol', 'oracle_rtol=1e-5'])
        self.assertEqual(parse_config(['degenerate', '--config', self.write_config(run.to_dict())]), run)


class TablerTests(SimpleTestCase):
    def test_format_cell(self):
        self.assertEqual(format_cell(None), '-')
        self.assertEqual(format_cell(1 / 3), '0.333333333333')
        self.assertEqual(format_cell(-0.0), '0')
        self.assertEqual(format_cell(3), '3')
        self.assertEqual(format_cell(1 - 2j), '1-2j')
        self.assertEqual(format_cell(complex(2, 0)), '2')

    def test_jsonable(self):
        values = to_jsonable({'a': np.array([1.5, 2.0]), 'b': np.complex128(1j), 'c': (np.int64(3), np.bool_(True))})
        self.assertEqual(values, {'a': [1.5, 2.0], 'b': {'re': 0.0, 'im': 1.0}, 'c': [3, True]})
        with self.assertRaises(UsageError):
            get_json_report({'x': float('nan')})

    def test_json_floats_round_trip(self):
        rng = np.random.default_rng(17)
        values = [0.1 + 0.2, -1.92257712736, 1.0, -0.0, 2.5e-8, 6.02214076e23, *rng.normal(size=20).tolist()]
        self.assertEqual(json.loads(get_json_report({'x': values}))['x'], values)

    def test_json_floats_have_seventeen_digits(self):
        text = get_json_report({'a': 0.1, 'b': 1.0, 'c': [np.float64(-8.0), 2.5e-8], 'n': 3})
        self.assertIn('"a": 0.10000000000000001', text)
        self.assertIn('"b": 1.0,', text)
        self.assertIn('-8.0,', text)
        self.assertIn('e-08', text)
        self.assertIn('"n": 3\n', text)
        self.assertEqual(format_json_float(-0.0), '0.0')
        self.assertIsInstance(json.loads(text)['b'], float)
        with self.assertRaises(UsageError):
            get_json_report({'x': [1.0, float('inf')]})

    def test_csv_quoting(self):
        text = get_csv_report([Table(title='t', columns=('key', 'detail'), rows=[('a', 'x, "y"'), ('b', None)])])
        self.assertEqual(text, 'key,detail\r\na,"x, ""y"""\r\nb,\r\n')


class CommandTests(SimpleTestCase):
    def setUp(self):
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.directory = Path(directory.name)

    def test_single_row_spectrum(self):
        report = json.loads(run_command('spectrum', '--omega', '1', '--B', '0', '--levels', '0', '--cutoff', '4',
                                        '--format', 'json'))
        self.assertEqual(list(report), ['command', 'config', 'params', 'result'])
        levels = report['result']['levels']
        self.assertEqual(len(levels), 1)
        self.assertEqual(levels[0]['landau_level'], 1.0)
        self.assertAlmostEqual(levels[0]['exact'], 1.0, places=12)

    def test_both_branches(self):
        report = json.loads(run_command('spectrum', '--omega', '0.1', '--levels', '2', '--cutoff', '6',
                                        '--branch', 'both', '--format', 'json'))
        levels = report['result']['levels']
        self.assertEqual([(row['n'], row['branch']) for row in levels], [(0, '+'), (1, '+'), (1, '-'), (2, '+'),
                                                                        (2, '-')])
        for row in levels:
            self.assertEqual(row['status'], 'ok')

    def test_reports_are_reproducible(self):
        argv = ('correct', '--omega', '0.1', '--gup-a', '1e-4', '--levels', '1', '--cutoff', '6', '--format', 'json')
        first, second = run_command(*argv), run_command(*argv)
        self.assertEqual(first, second)
        self.assertTrue(first.endswith('}\n'))
        self.assertNotIn(' \n', first)

        path = self.directory / 'echo.json'
        path.write_text(json.dumps(json.loads(first)['config']), encoding='utf-8')
        self.assertEqual(run_command('correct', '--config', str(path)), first)

    def test_correct_report(self):
        report = json.loads(run_command('correct', '--omega', '0.1', '--gup-a', '1e-4', '--levels', '1',
                                        '--cutoff', '6', '--format', 'json'))
        ground, first = report['result']['levels']
        self.assertAlmostEqual(ground['shifts_in_units'][0], -1.0, places=12)
        self.assertEqual(ground['discrepancy_flags'], [])
        self.assertAlmostEqual(first['oracle_slopes'][0], first['shifts_in_units'][0], delta=1e-6 * 2)
        self.assertEqual(set(first['breakdown']), {'ladder', 'zzbar', 'lz'})

    def test_text_report(self):
        text = run_command('correct', '--omega', '0.1', '--gup-a', '1e-4', '--levels', '1', '--cutoff', '6')
        self.assertTrue(text.startswith('First-order GUP shifts'))
        self.assertIn('-1.92257712736', text)

    def test_doubling_a_doubles_the_shifts(self):
        def shifts(gup_a):
            report = json.loads(run_command('degenerate', '--omega', '0.1', '--gup-a', gup_a, '--levels', '2',
                                            '--cutoff', '8', '--format', 'json'))
            return np.array(report['result']['clusters'][0]['shifts'])

        np.testing.assert_allclose(shifts('2e-4'), 2 * shifts('1e-4'), rtol=1e-12)

    def test_degenerate_report(self):
        report = json.loads(run_command('degenerate', '--omega', '0.1', '--gup-a', '1e-4', '--levels', '2',
                                        '--cutoff', '8', '--format', 'json'))
        cluster = report['result']['clusters'][0]
        c2_squared = (np.sqrt(1.8) + 1) / (2 * np.sqrt(1.8))
        np.testing.assert_allclose(cluster['shifts_in_units'], [-(2 + m + c2_squared) for m in (3, 2, 1, 0)],
                                   atol=1e-11)
        self.assertEqual(len(cluster['eigenvectors']), 4)
        self.assertEqual(set(cluster['eigenvectors'][0][0]), {'re', 'im'})

    def test_scan(self):
        argv = ('scan', '--omega', '1', '--B-min', '0', '--B-max', '3', '--steps', '4', '--cutoff', '8',
                '--levels', '2', '--gup-a', '1e-4')
        report = json.loads(run_command(*argv, '--format', 'json'))
        self.assertEqual(report['result']['critical_B'], 2.0)
        self.assertEqual([point['B'] for point in report['result']['points']], [0.0, 1.0, 2.0, 3.0])

        rows = list(csv.reader(io.StringIO(run_command(*argv, '--format', 'csv'))))
        header = rows[0]
        self.assertEqual(header[:5], ['B', 'omega_tilde', 'chirality', 'ground_shift', 'first_shift'])
        self.assertEqual(header[5:9], ['n2_shift_1', 'n2_shift_2', 'n2_shift_3', 'n2_shift_4'])
        self.assertEqual(len(rows), 5)
        self.assertEqual(rows[3][2], '0')

    @override_settings(GUP_DOSC_THREADS='none')
    def test_bad_thread_count(self):
        with self.assertRaises(CommandError) as caught:
            run_command('scan', '--B-min', '0', '--B-max', '1', '--steps', '2', '--cutoff', '8', '--levels', '2')
        self.assertEqual(caught.exception.returncode, config.EXIT_USAGE)

    def test_scan_threads(self):
        with override_settings(GUP_DOSC_THREADS=None):
            self.assertIsNone(get_scan_threads())
        with override_settings(GUP_DOSC_THREADS='3'):
            self.assertEqual(get_scan_threads(), 3)
        with override_settings(GUP_DOSC_THREADS='0'):
            with self.assertRaises(UsageError):
                get_scan_threads()

    def test_validate(self):
        report = json.loads(run_command('validate', '--omega', '1', '--B', '1', '--gup-a', '1e-4', '--cutoff', '12',
                                        '--format', 'json'))
        rows = {row['key']: row for row in report['result']['rows']}
        self.assertEqual(rows['E0_shift']['status'], 'MATCH')
        self.assertEqual(report['result']['unexpected'], [])

    def test_validate_reports_unexpected_discrepancies(self):
        out = io.StringIO()
        with self.assertRaises(CommandError) as caught:
            call_command('validate', '--omega', '1', '--B', '1', '--gup-a', '1e-4', '--cutoff', '12',
                         '--format', 'json', '--tol', 'printed_atol=1e-9', stdout=out)
        self.assertEqual(caught.exception.returncode, config.EXIT_DISCREPANCY)
        report = json.loads(out.getvalue())
        self.assertIn('printed_block_eigenvalues', report['result']['unexpected'])

    def test_usage_error_exit_status(self):
        with self.assertRaises(CommandError) as caught:
            run_command('spectrum', '--levels', '40', '--cutoff', '20')
        self.assertEqual(caught.exception.returncode, config.EXIT_USAGE)

    def test_computation_error_is_reported(self):
        out = io.StringIO()
        failure = ConvergenceError('eigh: no convergence after 60 sweeps', 1e-3)
        with mock.patch('oscillator.cli.runner.first_order_shift', side_effect=failure):
            with self.assertRaises(CommandError) as caught:
                call_command('correct', '--levels', '0', '--cutoff', '4', '--format', 'json', stdout=out)
        self.assertEqual(caught.exception.returncode, config.EXIT_COMPUTATION)
        error = json.loads(out.getvalue())['error']
        self.assertEqual(error['type'], 'ConvergenceError')
        self.assertEqual(error['residual'], 1e-3)

    def test_output_file(self):
        path = self.directory / 'spectrum.csv'
        self.assertEqual(run_command('spectrum', '--levels', '1', '--cutoff', '5', '--format', 'csv',
                                     '--output', str(path)), '')
        rows = list(csv.reader(io.StringIO(path.read_text(encoding='utf-8'), newline='')))
        self.assertEqual(rows[0], ['n', 'branch', 'landau', 'exact', 'relative error', 'status'])

    def test_xlsx_output(self):
        path = self.directory / 'validate.xlsx'
        run_command('validate', '--omega', '1', '--B', '1', '--gup-a', '1e-4', '--cutoff', '12', '--format', 'xlsx',
                    '--output', str(path))
        workbook = load_workbook(path)
        self.assertEqual(workbook.sheetnames[0], 'report')
        rows = workbook[workbook.sheetnames[1]]
        self.assertEqual(rows['A2'].value, 'key')
        self.assertEqual(rows['A3'].value, 'E0+')
