"""Degeneracy lifting, critical field and field scans."""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .. import config
from ..exceptions import BranchCollapseError, GupDoscError, UsageError
from ..fock import FockSpace
from ..model import ModelParams, chirality, landau_level, spinor_level, spinor_state
from .oracle import spectrum_by_sector
from .shifts import degenerate_shift, first_order_shift, level_cluster


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MultiplicityProfile:
    window: float
    clusters: tuple  # ((energy, multiplicity), ...) ascending in energy
    lll_multiplicity: int

    @property
    def histogram(self) -> dict:
        """multiplicity -> number of clusters with it"""
        counts = {}
        for _, multiplicity in self.clusters:
            counts[multiplicity] = counts.get(multiplicity, 0) + 1
        return dict(sorted(counts.items()))


class DegeneracyAnalysis(NamedTuple):
    before: MultiplicityProfile
    after: MultiplicityProfile


def _cluster(energies, window: float) -> tuple:
    energies = np.sort(np.asarray(energies, dtype=float))
    clusters = []
    start = 0
    for k in range(1, len(energies) + 1):
        if k == len(energies) or energies[k] - energies[k - 1] > window:
            clusters.append((float(np.mean(energies[start:k])), k - start))
            start = k
    return tuple(clusters)


def _largest_multiplicity(energies, window: float) -> int:
    return max((multiplicity for _, multiplicity in _cluster(energies, window)), default=0)


def lowest_landau_levels(space: FockSpace, params: ModelParams, margin: int = config.INTERIOR_MARGIN):
    """Interior members of the unpaired n = 0 tower (spectator 0, 1, ...)"""
    branch = config.PLUS if chirality(params) >= 0 else config.MINUS
    levels = []
    for m in range(space.cutoff - margin + 1):
        levels.append(spinor_level(params, 0, branch, n_spectator=m))
    return levels


def degeneracy_analysis(space: FockSpace, params: ModelParams,
                        energy_window: float = config.TOLERANCES['degeneracy_window']) -> DegeneracyAnalysis:
    """Multiplicities of the interior spectrum of H0 and of H0 + H'.

    energy_window is in units of m c^2. Clusters after the perturbation use the
    window floored at the solver noise (1e-12 m c^2 alpha_gup at least).
    """
    noise = config.NOISE_FLOOR
    if not np.isfinite(energy_window) or energy_window < noise:
        raise UsageError(f'degeneracy window {energy_window!r} is below the numerical noise floor {noise:g}')
    rest = params.rest_energy
    before_window = energy_window * rest
    after_window = min(before_window, max(noise, noise * params.alpha_gup) * rest)

    before = spectrum_by_sector(space, params, gup_a=0.0)
    after = spectrum_by_sector(space, params) if params.gup_a else before
    lll_states = [spinor_state(space, params, level) for level in lowest_landau_levels(space, params)]

    def profile(solutions, window):
        by_label = {solution.label: solution for solution in solutions}
        lll = []
        for state in lll_states:
            label = int(space.angular_labels()[np.flatnonzero(state)[0]])
            energy, _ = by_label[label].track(state)
            lll.append(energy)
        energies = np.concatenate([solution.eigenvalues[solution.interior] for solution in solutions])
        return MultiplicityProfile(window=window / rest, clusters=_cluster(energies, window),
                                   lll_multiplicity=_largest_multiplicity(lll, window))

    result = DegeneracyAnalysis(before=profile(before, before_window),
                                after=profile(after, after_window if params.gup_a else before_window))
    logger.info('degeneracy: lowest Landau level multiplicity %d -> %d',
                result.before.lll_multiplicity, result.after.lll_multiplicity)
    return result


def critical_field(params: ModelParams) -> float:
    """B at which omega_tilde vanishes: 2 omega m c / |e|"""
    return 2 * params.omega * params.mass * params.light_speed / params.charge_mag


@dataclass
class ScanPoint:
    B: float
    omega_tilde: float
    chirality: int
    ground_shift: Optional[float] = None
    first_shift: Optional[float] = None
    n2_shifts: list = field(default_factory=list)
    degeneracy_counts_before: dict = field(default_factory=dict)
    degeneracy_counts_after: dict = field(default_factory=dict)
    lll_multiplicity_before: Optional[int] = None
    lll_multiplicity_after: Optional[int] = None
    landau_formula_status: str = 'ok'
    error: Optional[str] = None


@dataclass
class ScanResult:
    points: list
    critical_B: Optional[float] = None


def landau_status(params: ModelParams, levels: int) -> str:
    """'ok', or where the literal Landau formula collapses"""
    try:
        for n in range(levels + 1):
            landau_level(params, n)
    except BranchCollapseError as error:
        return f'branch collapse at n={error.n}'
    return 'ok'


def scan_point(space: FockSpace, params: ModelParams, levels: int = config.DEFAULT_LEVELS,
               cluster_level: int = config.DEFAULT_CLUSTER_LEVEL,
               cluster_size: int = config.DEFAULT_CLUSTER_SIZE,
               energy_window: float = config.TOLERANCES['degeneracy_window']) -> ScanPoint:
    point = ScanPoint(B=params.B, omega_tilde=params.omega_tilde, chirality=chirality(params))
    point.landau_formula_status = landau_status(params, levels)
    if point.landau_formula_status != 'ok':
        logger.warning('scan: B=%r: %s', params.B, point.landau_formula_status)
    try:
        hand = chirality(params) or 1
        ground = spinor_level(params, 0, config.PLUS if hand > 0 else config.MINUS)
        point.ground_shift = first_order_shift(space, params, ground).shifts[0]
        point.first_shift = first_order_shift(space, params, spinor_level(params, 1)).shifts[0]
        cluster = level_cluster(params, cluster_level, size=cluster_size)
        point.n2_shifts = degenerate_shift(space, params, cluster).shifts
        analysis = degeneracy_analysis(space, params, energy_window)
        point.degeneracy_counts_before = analysis.before.histogram
        point.degeneracy_counts_after = analysis.after.histogram
        point.lll_multiplicity_before = analysis.before.lll_multiplicity
        point.lll_multiplicity_after = analysis.after.lll_multiplicity
    except GupDoscError as error:
        point.error = f'{type(error).__name__}: {error}'
        logger.warning('scan: B=%r failed: %s', params.B, point.error)
    return point


def field_scan(space: FockSpace, base_params: ModelParams, B_values, threads: int = None, **options) -> ScanResult:
    """Scan points in input order; a failing point records its error and the scan goes on.

    Params:
        threads (int): worker threads, None or 1 for a sequential scan
        options: levels, cluster_level, cluster_size, energy_window for every point

    """
    B_values = [float(B) for B in B_values]
    if not B_values:
        raise UsageError('field scan needs at least one B value')
    if any(later < earlier for earlier, later in zip(B_values, B_values[1:])):
        raise UsageError('B values must be sorted ascending')
    if threads is not None and threads < 1:
        raise UsageError(f'thread count must be positive, got {threads!r}')

    def work(B):
        logger.info('scan: B=%r', B)
        return scan_point(space, base_params.replace(B=B), **options)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            points = list(executor.map(work, B_values))
    else:
        points = [work(B) for B in B_values]

    reduced = [point.omega_tilde for point in points]
    critical = None
    if min(reduced) <= 0 <= max(reduced):
        critical = critical_field(base_params)
    return ScanResult(points=points, critical_B=critical)
