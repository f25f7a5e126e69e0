"""First-order energy corrections from H' = a V, V = -c p^2 on both spinor components."""
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import config
from ..exceptions import DegenerateClusterError, UsageError
from ..fock import FockSpace, ladder_terms, p_squared
from ..model import (ModelParams, SpinorLevel, oscillator_scale, spinor_components, spinor_level,
                     spinor_state)
from ..numerics import as_matrix, eigh, identity, is_hermitian, max_norm
from .oracle import oracle_slopes, slope_allowance


logger = logging.getLogger(__name__)

NONDEGENERATE = 'nondegenerate'
DEGENERATE = 'degenerate'


@dataclass(frozen=True)
class ClusterState:
    label: str
    components: tuple  # ((n_a, n_b, spin, amplitude), ...)

    @classmethod
    def from_level(cls, level: SpinorLevel) -> 'ClusterState':
        return cls(label=level.label, components=tuple(spinor_components(level)))

    def to_dict(self) -> dict:
        return {
            'label': self.label,
            'components': [
                {'n_a': n_a, 'n_b': n_b, 'spin': spin, 're': amplitude.real, 'im': amplitude.imag}
                for n_a, n_b, spin, amplitude in self.components
            ],
        }


@dataclass
class PTReport:
    cluster_label: str
    unperturbed_energy: Optional[float]
    method: str
    subspace_basis: list
    subspace_matrix: np.ndarray
    shifts: list
    shifts_in_units: Optional[list]
    eigenvectors: np.ndarray
    shift_units: str = config.SHIFT_UNITS
    unit: Optional[float] = None
    oracle_slopes: list = field(default_factory=list)
    breakdown: Optional[dict] = None
    paper_value: Optional[float] = None
    discrepancy_flags: list = field(default_factory=list)


def level_cluster(params: ModelParams, n: int, branch: str = config.PLUS,
                  size: int = config.DEFAULT_CLUSTER_SIZE) -> list:
    """The first `size` members of the Landau tower of level n (spectator occupations 0..size-1)"""
    if size < 1:
        raise UsageError('cluster size must be positive')
    return [spinor_level(params, n, branch, n_spectator=m) for m in range(size)]


def published_shift(level: SpinorLevel) -> Optional[float]:
    """Published first-order shift of a level in units of a c m hbar w, when one exists"""
    if level.chirality < 0 or level.n_spectator:
        return None
    if level.n == 0:
        return config.PUBLISHED_GROUND_SHIFT
    if level.n == 1 and level.branch == config.PLUS:
        return config.PUBLISHED_FIRST_SHIFT
    return None


def _check_interior(space: FockSpace, level: SpinorLevel):
    if not space.include_spin:
        raise UsageError('perturbation theory needs a space with spin')
    for n_a, n_b, spin, _ in spinor_components(level):
        space.index(n_a, n_b, spin)
        if n_a + n_b > space.cutoff - config.INTERIOR_MARGIN:
            raise UsageError(
                f'{level.label} reaches the truncation edge of cutoff {space.cutoff}; '
                f'use a cutoff of at least {n_a + n_b + config.INTERIOR_MARGIN}'
            )


def _local_space(space: FockSpace, levels) -> FockSpace:
    """Smallest spinless space on which p^2 is exact between the levels' components"""
    top = max(max(n_a, n_b) for level in levels for n_a, n_b, _, _ in spinor_components(level))
    return FockSpace(min(space.cutoff, top + 2), include_spin=False)


def _spinless_elements(local: FockSpace, levels, operator: np.ndarray) -> np.ndarray:
    """<i| O (x) I |j> for a spinless operator O over `local`"""
    components = [spinor_components(level) for level in levels]
    matrix = np.zeros((len(levels), len(levels)), dtype=np.complex128)
    for i, left in enumerate(components):
        for j, right in enumerate(components):
            matrix[i, j] = sum(
                np.conj(left_amp) * right_amp * operator[local.index(la, lb), local.index(ra, rb)]
                for la, lb, left_spin, left_amp in left
                for ra, rb, right_spin, right_amp in right
                if left_spin == right_spin
            )
    return matrix


def perturbation_elements(space: FockSpace, params: ModelParams, levels, operator=None) -> np.ndarray:
    """<i|V|j> over the levels, V = H' / a (or a caller-supplied operator over `space`)"""
    if operator is not None:
        vectors = np.column_stack([spinor_state(space, params, level) for level in levels])
        return vectors.conj().T @ operator @ vectors
    if params.omega_tilde == 0:
        return np.zeros((len(levels), len(levels)), dtype=np.complex128)
    local = _local_space(space, levels)
    p2 = p_squared(local, oscillator_scale(params))
    return -params.light_speed * _spinless_elements(local, levels, p2)


def _breakdown(space: FockSpace, params: ModelParams, level: SpinorLevel) -> Optional[dict]:
    """Shift of each term of p^2 = ladder + z zbar + L_z, in units of a c m hbar |w|"""
    if params.omega_tilde == 0:
        return None
    local = _local_space(space, [level])
    terms = ladder_terms(local, oscillator_scale(params))
    return {
        name: float((-params.light_speed * _spinless_elements(local, [level], term)[0, 0]).real
                    / params.shift_unit)
        for name, term in terms.items()
    }


def _partners(space: FockSpace, params: ModelParams, level: SpinorLevel, custom: bool) -> list:
    """Interior tower members degenerate with `level`.

    H' conserves J_z, so unless a custom operator is used only partners in the
    level's own J_z sector can couple (there are none for the physical H').
    """
    labels = space.angular_labels()
    own = labels[space.index(*spinor_components(level)[0][:3])]
    partners = []
    for m in range(space.cutoff + 1):
        if m == level.n_spectator:
            continue
        partner = spinor_level(params, level.n, level.branch, n_spectator=m)
        try:
            _check_interior(space, partner)
        except UsageError:
            break
        if custom or labels[space.index(*spinor_components(partner)[0][:3])] == own:
            partners.append(partner)
    return partners


def _in_units(values, params: ModelParams) -> Optional[list]:
    if params.shift_unit == 0:
        return None
    return [float(value) / params.shift_unit for value in values]


def _compare_oracle(report: PTReport, params: ModelParams, tolerances: dict):
    allowance = slope_allowance(params, config.ORACLE_STEPS[0])
    for computed, slope in zip(report.shifts_in_units, report.oracle_slopes):
        if abs(computed - slope) > tolerances['oracle_rtol'] * abs(computed) + allowance:
            report.discrepancy_flags.append(
                f'oracle slope {slope:+.12g} differs from first-order shift {computed:+.12g}'
            )
            logger.warning('%s: oracle slope %r vs shift %r', report.cluster_label, slope, computed)


def _tolerances(overrides) -> dict:
    tolerances = dict(config.TOLERANCES)
    tolerances.update(overrides or {})
    return tolerances


def first_order_shift(space: FockSpace, params: ModelParams, level: SpinorLevel, operator=None,
                      oracle: bool = False, tolerances: dict = None) -> PTReport:
    """<psi|H'|psi> for a level with no coupled degenerate partner.

    Params:
        operator (ComplexMatrix): perturbation per unit a over `space`, instead of -c p^2
        oracle (bool): also measure dE/da by exact diagonalization

    """
    tolerances = _tolerances(tolerances)
    if operator is not None and oracle:
        raise UsageError('the oracle only knows the physical perturbation')
    _check_interior(space, level)
    partners = _partners(space, params, level, custom=operator is not None)
    elements = perturbation_elements(space, params, [level, *partners], operator)
    scale = max(max_norm(elements), np.finfo(float).tiny)
    for column, partner in enumerate(partners, start=1):
        coupling = abs(elements[0, column])
        if coupling > config.COUPLING_TOL * scale:
            raise DegenerateClusterError(f'{level.label} (partner {partner.label})', coupling)

    value = float(elements[0, 0].real)
    report = PTReport(
        cluster_label=level.label,
        unperturbed_energy=level.energy,
        method=NONDEGENERATE,
        subspace_basis=[ClusterState.from_level(level)],
        subspace_matrix=as_matrix([[params.gup_a * value]]),
        shifts=[params.gup_a * value],
        shifts_in_units=_in_units([value], params),
        eigenvectors=identity(1),
        unit=params.gup_a * params.shift_unit,
        breakdown=_breakdown(space, params, level) if operator is None else None,
        paper_value=published_shift(level),
    )
    if report.paper_value is not None and report.shifts_in_units is not None:
        computed = report.shifts_in_units[0]
        if abs(computed - report.paper_value) > tolerances['match_atol']:
            report.discrepancy_flags.append(
                f'published value {report.paper_value:+g} differs from computed {computed:+.12g}'
            )
    if oracle and report.shifts_in_units is not None:
        report.oracle_slopes = oracle_slopes(space, params, [spinor_state(space, params, level)])
        _compare_oracle(report, params, tolerances)
    return report


def degenerate_shift(space: FockSpace, params: ModelParams, cluster, operator=None,
                     oracle: bool = False, tolerances: dict = None, label: str = None) -> PTReport:
    """Diagonalize <i|H'|j> over a cluster of degenerate levels"""
    tolerances = _tolerances(tolerances)
    cluster = list(cluster)
    if not cluster:
        raise UsageError('degenerate cluster is empty')
    if operator is not None and oracle:
        raise UsageError('the oracle only knows the physical perturbation')
    for level in cluster:
        _check_interior(space, level)
    energies = [level.energy for level in cluster]
    spread = max(energies) - min(energies)
    if spread > tolerances['degeneracy_window'] * params.rest_energy:
        raise UsageError(f'cluster states are not degenerate (energy spread {spread:.3e})')

    elements = perturbation_elements(space, params, cluster, operator)
    if not is_hermitian(as_matrix(elements)):
        raise UsageError('perturbation restricted to the cluster is not Hermitian')
    decomposition = eigh(as_matrix(elements))
    if label is None:
        first = cluster[0]
        same = all(level.n == first.n and level.branch == first.branch for level in cluster)
        label = f'n={first.n}, branch {first.branch}' if same else 'cluster'

    report = PTReport(
        cluster_label=label,
        unperturbed_energy=float(np.mean(energies)),
        method=DEGENERATE,
        subspace_basis=[ClusterState.from_level(level) for level in cluster],
        subspace_matrix=as_matrix(params.gup_a * elements),
        shifts=[params.gup_a * float(value) for value in decomposition.eigenvalues],
        shifts_in_units=_in_units(decomposition.eigenvalues, params),
        eigenvectors=decomposition.eigenvectors,
        unit=params.gup_a * params.shift_unit,
    )
    if oracle and report.shifts_in_units is not None:
        states = [spinor_state(space, params, level) for level in cluster]
        report.oracle_slopes = oracle_slopes(space, params, states)
        _compare_oracle(report, params, tolerances)
    return report


def degenerate_block(matrix, label: str = 'printed block') -> PTReport:
    """Eigen-decomposition of a cluster matrix given directly (units are the caller's)"""
    matrix = as_matrix(matrix)
    if not is_hermitian(matrix):
        raise UsageError(f'{label} is not Hermitian')
    decomposition = eigh(matrix)
    shifts = [float(value) for value in decomposition.eigenvalues]
    return PTReport(
        cluster_label=label,
        unperturbed_energy=None,
        method=DEGENERATE,
        subspace_basis=[],
        subspace_matrix=matrix,
        shifts=shifts,
        shifts_in_units=list(shifts),
        eigenvectors=decomposition.eigenvectors,
    )
