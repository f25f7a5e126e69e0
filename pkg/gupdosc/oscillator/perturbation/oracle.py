"""Exact-diagonalization oracle.

H0 and H' both conserve 2 J_z, so the truncated Hamiltonian is diagonalized one
J_z sector at a time. An eigenvector counts as interior when at least
1 - INTERIOR_WEIGHT_TOL of its weight sits on states with n_a + n_b <= cutoff - margin.
"""
import logging
from dataclasses import dataclass

import numpy as np

from .. import config
from ..exceptions import CriticalFieldError, UsageError
from ..fock import FockSpace
from ..model import ModelParams, sector_hamiltonian
from ..numerics import AUTO, eigh


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SectorSolution:
    label: int  # 2 J_z / hbar
    indices: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    interior: np.ndarray

    def track(self, state: np.ndarray):
        """(eigenvalue, overlap) of the eigenvector with the largest overlap with `state`"""
        overlaps = np.abs(self.eigenvectors.conj().T @ state[self.indices]) ** 2
        best = int(np.argmax(overlaps))
        return float(self.eigenvalues[best]), float(overlaps[best])


def solve_sector(space: FockSpace, params: ModelParams, label: int, gup_a: float = None,
                 margin: int = config.INTERIOR_MARGIN, method: str = AUTO) -> SectorSolution:
    sectors = space.sectors()
    if label not in sectors:
        raise UsageError(f'no states with 2 J_z = {label} below cutoff {space.cutoff}')
    indices = sectors[label]
    decomposition = eigh(sector_hamiltonian(space, params, indices, gup_a=gup_a), method=method)
    inner = space.interior_mask(margin)[indices]
    weights = np.sum(np.abs(decomposition.eigenvectors[inner, :]) ** 2, axis=0)
    return SectorSolution(
        label=label,
        indices=indices,
        eigenvalues=decomposition.eigenvalues,
        eigenvectors=decomposition.eigenvectors,
        interior=weights >= 1.0 - config.INTERIOR_WEIGHT_TOL,
    )


def spectrum_by_sector(space: FockSpace, params: ModelParams, gup_a: float = None,
                       margin: int = config.INTERIOR_MARGIN, method: str = AUTO, labels=None):
    """Sector solutions of H0 + a V, every sector (or only `labels`) in ascending label order"""
    labels = sorted(space.sectors()) if labels is None else sorted(labels)
    return [solve_sector(space, params, label, gup_a=gup_a, margin=margin, method=method) for label in labels]


def interior_energies(solutions) -> np.ndarray:
    """Ascending interior eigenvalues of a set of sector solutions"""
    values = [solution.eigenvalues[solution.interior] for solution in solutions]
    return np.sort(np.concatenate(values)) if values else np.array([])


def exact_oracle(space: FockSpace, params: ModelParams, gup_steps, method: str = AUTO):
    """[(gup_a, ascending interior spectrum of H0 + gup_a V)] for every step"""
    steps = [float(step) for step in gup_steps]
    if not steps or steps[0] != 0.0:
        raise UsageError('oracle steps must start at 0')
    if any(later <= earlier for earlier, later in zip(steps, steps[1:])):
        raise UsageError('oracle steps must be strictly ascending')
    if any(step < 0 for step in steps):
        raise UsageError('oracle steps must be nonnegative')
    spectra = []
    for step in steps:
        logger.info('oracle: diagonalizing at gup_a=%r (cutoff %d)', step, space.cutoff)
        solutions = spectrum_by_sector(space, params, gup_a=step, method=method)
        spectra.append((step, interior_energies(solutions)))
    return spectra


def state_label(space: FockSpace, state: np.ndarray) -> int:
    support = np.flatnonzero(np.abs(state) > 0)
    if not len(support):
        raise UsageError('cannot track the zero vector')
    labels = np.unique(space.angular_labels()[support])
    if len(labels) != 1:
        raise UsageError('tracked state mixes J_z sectors')
    return int(labels[0])


def slope_allowance(params: ModelParams, step: float) -> float:
    """Rounding floor of a central difference at `step` (units of a c m hbar |w|)"""
    return 100 * np.finfo(float).eps * params.rest_energy * params.mass * params.light_speed / (
        step * params.shift_unit
    )


def oracle_slopes(space: FockSpace, params: ModelParams, states, steps=config.ORACLE_STEPS,
                  method: str = AUTO) -> list:
    """dE/da at a = 0 for each state, in units of c m hbar |w|, ascending.

    Each state is followed through its sector by maximum overlap. Central differences at
    alpha_gup = h and r h are combined by one Richardson step, (r^2 D(h) - D(r h)) / (r^2 - 1).
    """
    if params.omega_tilde == 0:
        raise CriticalFieldError('shift unit a c m hbar |omega_tilde| vanishes at the critical field')
    small, large = steps
    if not 0 < small < large:
        raise UsageError(f'oracle steps must be positive and ascending, got {steps!r}')
    ratio = (large / small) ** 2
    mc = params.mass * params.light_speed

    cache = {}

    def energy(state, label, gup_a):
        key = (label, gup_a)
        if key not in cache:
            cache[key] = solve_sector(space, params, label, gup_a=gup_a, method=method)
        value, overlap = cache[key].track(state)
        if overlap < 0.5:
            logger.warning('oracle: weak overlap %.3g while tracking a state in sector %d', overlap, label)
        return value

    slopes = []
    for state in states:
        label = state_label(space, state)
        differences = []
        for step in (small, large):
            a = step / mc
            differences.append((energy(state, label, a) - energy(state, label, -a)) / (2 * a))
        slope = (ratio * differences[0] - differences[1]) / (ratio - 1)
        slopes.append(slope / params.shift_unit)
    return sorted(slopes)
