"""Command dispatch and report assembly."""
import logging

import numpy as np
from django.conf import settings

from .. import config
from ..exceptions import BranchCollapseError, GupDoscError, UsageError
from ..fock import FockSpace
from ..model import chirality, landau_level, level_energy, spinor_level, spinor_state
from ..perturbation import degenerate_shift, field_scan, first_order_shift, level_cluster, replicate_paper
from ..perturbation.oracle import solve_sector, state_label
from .config import RunConfig
from .messages import get_message
from .table.tabler import Table, get_created_xlsx_path, get_csv_report, get_json_report, get_text_report


logger = logging.getLogger(__name__)


class Outcome:
    """What a command produced: the `result` object of the report, its tables and an exit status"""

    def __init__(self, result: dict, tables: list, notes=(), status: int = config.EXIT_OK, message: str = ''):
        self.result = result
        self.tables = tables
        self.notes = list(notes)
        self.status = status
        self.message = message


def get_scan_threads():
    value = settings.GUP_DOSC_THREADS
    if value is None or str(value).strip() == '':
        return None
    try:
        threads = int(str(value).strip())
    except ValueError:
        raise UsageError(get_message('threads_message', value=value))
    if threads < 1:
        raise UsageError(get_message('threads_message', value=value))
    return threads


def _lowest_branch(params) -> str:
    return config.PLUS if (chirality(params) or 1) > 0 else config.MINUS


def _requested_levels(run: RunConfig, params):
    """(n, branch) pairs the run asks for; n = 0 only on the branch where it exists"""
    for n in range(run.levels + 1):
        for branch in run.branches:
            if n == 0 and branch != _lowest_branch(params):
                continue
            yield n, branch


def pt_report_to_dict(report) -> dict:
    return {
        'cluster_label': report.cluster_label,
        'method': report.method,
        'unperturbed_energy': report.unperturbed_energy,
        'shifts': report.shifts,
        'shifts_in_units': report.shifts_in_units,
        'shift_units': report.shift_units,
        'unit': report.unit,
        'oracle_slopes': report.oracle_slopes,
        'breakdown': report.breakdown,
        'paper_value': report.paper_value,
        'discrepancy_flags': report.discrepancy_flags,
        'subspace_basis': [state.to_dict() for state in report.subspace_basis],
        'subspace_matrix': report.subspace_matrix,
        'eigenvectors': report.eigenvectors,
    }


def spectrum_response(run: RunConfig) -> Outcome:
    """Landau formula next to the interior exact spectrum of H0"""
    params = run.params
    space = FockSpace(run.cutoff)
    rest = params.rest_energy
    rtol = run.tolerances['spectrum_rtol']
    solutions = {}
    levels = []
    for n, branch in _requested_levels(run, params):
        level = spinor_level(params, n, branch)
        state = spinor_state(space, params, level)
        label = state_label(space, state)
        if label not in solutions:
            solutions[label] = solve_sector(space, params, label, gup_a=0.0)
        exact, overlap = solutions[label].track(state)
        try:
            formula = landau_level(params, n, branch)
        except BranchCollapseError as error:
            formula, status, error_value = None, 'branch collapse', None
            logger.warning('spectrum: %s', error)
        else:
            error_value = abs(exact - formula) / abs(formula)
            status = 'ok' if error_value <= rtol else 'outside tolerance'
            if status != 'ok':
                logger.warning('spectrum: n=%d %s exact %r vs Landau %r', n, branch, exact, formula)
        levels.append({
            'n': n,
            'branch': branch,
            'landau_level': formula,
            'landau_level_in_units': None if formula is None else formula / rest,
            'level_energy': level_energy(params, n, branch),
            'exact': exact,
            'exact_in_units': exact / rest,
            'overlap': overlap,
            'relative_error': error_value,
            'status': status,
        })

    table = Table(
        title=f'Levels (energies in {config.ENERGY_UNITS})',
        columns=('n', 'branch', 'landau', 'exact', 'relative error', 'status'),
        rows=[(row['n'], row['branch'], row['landau_level_in_units'], row['exact_in_units'],
               row['relative_error'], row['status']) for row in levels],
    )
    result = {
        'energy_units': config.ENERGY_UNITS,
        'rest_energy': rest,
        'chirality': chirality(params),
        'levels': levels,
    }
    notes = [f'lambda = {params.lam:.12g}, omega_tilde = {params.omega_tilde:.12g}, cutoff {run.cutoff}']
    return Outcome(result, [table], notes)


def correct_response(run: RunConfig) -> Outcome:
    """First-order shift of every requested level, checked against the exact-diagonalization slope"""
    params = run.params
    space = FockSpace(run.cutoff)
    oracle = params.omega_tilde != 0
    reports = []
    for n, branch in _requested_levels(run, params):
        report = first_order_shift(space, params, spinor_level(params, n, branch), oracle=oracle,
                                   tolerances=run.tolerances)
        reports.append((n, branch, report))

    rows = []
    for n, branch, report in reports:
        breakdown = report.breakdown or {}
        rows.append((n, branch, report.shifts[0],
                     report.shifts_in_units[0] if report.shifts_in_units else None,
                     report.oracle_slopes[0] if report.oracle_slopes else None,
                     breakdown.get('ladder'), breakdown.get('zzbar'), breakdown.get('lz'),
                     report.paper_value, 'flagged' if report.discrepancy_flags else 'ok'))
    table = Table(
        title=f'Shifts (natural units and multiples of {config.SHIFT_UNITS})',
        columns=('n', 'branch', 'shift', 'in units', 'oracle', 'ladder', 'zzbar', 'lz', 'published', 'status'),
        rows=rows,
    )
    result = {
        'shift_units': config.SHIFT_UNITS,
        'levels': [dict(n=n, branch=branch, **pt_report_to_dict(report)) for n, branch, report in reports],
    }
    notes = [flag for _, _, report in reports for flag in
             (f'{report.cluster_label}: {text}' for text in report.discrepancy_flags)]
    if not oracle:
        notes.append('shift unit vanishes at the critical field: no shifts in units, no oracle')
    return Outcome(result, [table], notes)


def degenerate_response(run: RunConfig) -> Outcome:
    """Diagonalize H' inside the tower of the requested level, on each requested branch"""
    params = run.params
    space = FockSpace(run.cutoff)
    oracle = params.omega_tilde != 0
    reports = []
    for branch in run.branches:
        if run.cluster_level == 0 and branch != _lowest_branch(params):
            continue
        cluster = level_cluster(params, run.cluster_level, branch, size=run.cluster_size)
        reports.append(degenerate_shift(space, params, cluster, oracle=oracle, tolerances=run.tolerances))
    if not reports:
        raise UsageError(f'level n=0 has no {run.branch} branch at this field')

    tables = []
    for report in reports:
        rows = []
        for k, shift in enumerate(report.shifts):
            rows.append((k + 1, shift,
                         report.shifts_in_units[k] if report.shifts_in_units else None,
                         report.oracle_slopes[k] if report.oracle_slopes else None,
                         list(report.eigenvectors[:, k])))
        tables.append(Table(title=f'Cluster {report.cluster_label}',
                            columns=('k', 'shift', 'in units', 'oracle', 'eigenvector'), rows=rows))
        tables.append(Table(title=f'Cluster {report.cluster_label}: <i|H\'|j> / ({config.SHIFT_UNITS})',
                            columns=('state', *(str(j + 1) for j in range(len(report.subspace_basis)))),
                            rows=[(state.label, *_matrix_row(report, i))
                                  for i, state in enumerate(report.subspace_basis)]))
    result = {
        'shift_units': config.SHIFT_UNITS,
        'cluster_level': run.cluster_level,
        'cluster_size': run.cluster_size,
        'clusters': [pt_report_to_dict(report) for report in reports],
    }
    notes = [f'{report.cluster_label}: {flag}' for report in reports for flag in report.discrepancy_flags]
    return Outcome(result, tables, notes)


def _matrix_row(report, i):
    """Row i of the cluster matrix in shift units, rebuilt as V diag(shifts) V^dagger"""
    if report.shifts_in_units is None:
        return [None] * len(report.subspace_basis)
    vectors = report.eigenvectors
    matrix = vectors @ np.diag(report.shifts_in_units) @ vectors.conj().T
    return [complex(value) for value in matrix[i]]


def scan_response(run: RunConfig) -> Outcome:
    """Shifts and degeneracy counts along an evenly spaced field range"""
    base = run.params
    space = FockSpace(run.cutoff)
    B_input = run.B_values()
    scan = field_scan(space, base, [run.natural_field(B) for B in B_input], threads=get_scan_threads(),
                      levels=run.levels, cluster_level=run.cluster_level, cluster_size=run.cluster_size,
                      energy_window=run.tolerances['degeneracy_window'])
    width = max([run.cluster_size, *(len(point.n2_shifts) for point in scan.points)])
    columns = ('B', 'omega_tilde', 'chirality', 'ground_shift', 'first_shift',
               *(f'n2_shift_{k}' for k in range(1, width + 1)),
               'degeneracy_counts_before', 'degeneracy_counts_after',
               'lll_multiplicity_before', 'lll_multiplicity_after', 'landau_formula_status', 'error')
    rows = []
    for point in scan.points:
        shifts = list(point.n2_shifts) + [None] * (width - len(point.n2_shifts))
        rows.append((point.B, point.omega_tilde, point.chirality, point.ground_shift, point.first_shift,
                     *shifts, _counts(point.degeneracy_counts_before), _counts(point.degeneracy_counts_after),
                     point.lll_multiplicity_before, point.lll_multiplicity_after, point.landau_formula_status, point.error))
    result = {
        'B_input': B_input,
        'critical_B': scan.critical_B,
        'points': [
            {**point.__dict__,
             'degeneracy_counts_before': {str(k): v for k, v in point.degeneracy_counts_before.items()},
             'degeneracy_counts_after': {str(k): v for k, v in point.degeneracy_counts_after.items()}}
            for point in scan.points
        ],
    }
    notes = []
    if scan.critical_B is not None:
        notes.append(f'critical field B_c = {scan.critical_B:.12g} (natural units) lies in the scan range')
    return Outcome(result, [Table(title='Scan points', columns=columns, rows=rows)], notes)


def _counts(histogram: dict) -> str:
    """multiplicity:count pairs, e.g. '1:12 2:30'"""
    return ' '.join(f'{multiplicity}:{count}' for multiplicity, count in histogram.items())


def validate_response(run: RunConfig) -> Outcome:
    """Published results side by side with computed ones"""
    params = run.params
    replication = replicate_paper(FockSpace(run.cutoff), params, tolerances=run.tolerances)
    rows = [(row.key, row.status, 'yes' if row.known else 'no', row.computed, row.published, row.detail)
            for row in replication.rows]
    tables = [Table(title='Rows', columns=('key', 'status', 'known', 'computed', 'published', 'detail'),
                    rows=rows)]
    for name in ('printed_block', 'computed_block'):
        if name in replication.blocks:
            matrix = replication.blocks[name]
            tables.append(Table(title=name.replace('_', ' '),
                                columns=tuple(str(j + 1) for j in range(len(matrix))),
                                rows=[tuple(matrix[i, j] for j in range(len(matrix))) for i in range(len(matrix))]))
    result = {
        'rows': [{'key': row.key, 'description': row.description, 'status': row.status, 'known': row.known,
                  'computed': row.computed, 'published': row.published, 'detail': row.detail}
                 for row in replication.rows],
        'blocks': replication.blocks,
        'unexpected': [row.key for row in replication.unexpected()],
    }
    unexpected = replication.unexpected()
    if unexpected:
        message = get_message('discrepancy_message', count=len(unexpected),
                              keys=', '.join(row.key for row in unexpected))
        return Outcome(result, tables, [message], status=config.EXIT_DISCREPANCY, message=message)
    return Outcome(result, tables)


additional_handlers = {
    # command name -> response building its report
    config.SPECTRUM: spectrum_response,
    config.CORRECT: correct_response,
    config.DEGENERATE: degenerate_response,
    config.SCAN: scan_response,
    config.VALIDATE: validate_response,
}


def get_report(run: RunConfig, outcome: Outcome = None, error: Exception = None) -> dict:
    report = {
        'command': run.command,
        'config': run.to_dict(),
        'params': run.params.to_dict(),
    }
    if error is not None:
        report['error'] = {'type': type(error).__name__, 'message': str(error),
                           **{key: value for key, value in vars(error).items() if not key.startswith('_')}}
    else:
        report['result'] = outcome.result
    return report


def render(run: RunConfig, report: dict, outcome: Outcome = None) -> str:
    title = get_message(f'{run.command}_title', level=run.cluster_level, branch=run.branch)
    if 'error' in report:
        title = get_message('error_title')
        tables = [Table(title=report['error']['type'], columns=('message',), rows=[(report['error']['message'],)])]
        notes = []
    else:
        tables, notes = outcome.tables, outcome.notes
    if run.format == config.JSON:
        return get_json_report(report)
    if run.format == config.CSV:
        return get_csv_report(tables)
    if run.format == config.XLSX:
        return get_created_xlsx_path(title, tables, run.output, notes)
    return get_text_report(title, tables, notes)


def write(run: RunConfig, text: str, stdout):
    if run.format == config.XLSX:
        logger.info('report written to %s', text)
        return
    if run.output:
        try:
            with open(run.output, 'w', encoding='utf-8', newline='') as report_file:
                report_file.write(text)
        except OSError as error:
            raise UsageError(f'cannot write {run.output}: {error}')
        logger.info('report written to %s', run.output)
        return
    stdout.write(text)


def run(run_config: RunConfig, stdout):
    """Run a command and write its report. Returns (exit status, message).

    UsageError propagates to the caller; any other solver error becomes an
    error report with exit status 3.
    """
    run = run_config
    handler = additional_handlers[run.command]
    logger.info('%s: cutoff %d, params %s', run.command, run.cutoff, run.params.to_dict())
    try:
        outcome = handler(run)
    except UsageError:
        raise
    except GupDoscError as error:
        logger.error('%s failed: %s', run.command, error)
        write(run, render(run, get_report(run, error=error)), stdout)
        return config.EXIT_COMPUTATION, get_message('computation_message', error=error)
    write(run, render(run, get_report(run, outcome), outcome), stdout)
    return outcome.status, outcome.message
