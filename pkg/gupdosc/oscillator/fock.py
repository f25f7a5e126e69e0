"""Truncated two-mode Fock space (times spin) and the oscillator operators built on it.

Basis states are |n_a, n_b; s> with n_a, n_b in 0..cutoff and s = +1/2 first. The flat
index is lexicographic in (s, n_a, n_b). Mode `a` is the chiral mode entering H0 for
omega_tilde > 0, mode `b` the spectator mode carrying the Landau degeneracy.

Sign conventions are listed in CONVENTIONS.md:
    z = l (i a + b^dagger),        zbar = z^dagger,         l = sqrt(hbar / (m |w|))
    p_z = (s / 2)(a^dagger - i b), p_zbar = p_z^dagger,     s = sqrt(m |w| hbar)
"""
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np

from . import config
from .exceptions import CriticalFieldError, DimensionMismatchError, UsageError
from .numerics import ComplexMatrix, adjoint, as_matrix


class BasisState(NamedTuple):
    n_a: int
    n_b: int
    spin: int = config.SPIN_UP

    def __str__(self):
        spin = '+1/2' if self.spin == config.SPIN_UP else '-1/2'
        return f'|{self.n_a},{self.n_b};{spin}>'


@dataclass(frozen=True)
class FockSpace:
    cutoff: int
    include_spin: bool = True

    def __post_init__(self):
        if not isinstance(self.cutoff, (int, np.integer)) or self.cutoff < 1:
            raise UsageError(f'cutoff must be a positive integer, got {self.cutoff!r}')

    @property
    def levels(self) -> int:
        """Occupations per mode (cutoff + 1)"""
        return self.cutoff + 1

    @property
    def spinless_dim(self) -> int:
        return self.levels ** 2

    @property
    def dim(self) -> int:
        return self.spinless_dim * (2 if self.include_spin else 1)

    def spinless(self) -> 'FockSpace':
        return FockSpace(self.cutoff, include_spin=False)

    def index(self, n_a: int, n_b: int, spin: int = config.SPIN_UP) -> int:
        if not (0 <= n_a <= self.cutoff and 0 <= n_b <= self.cutoff):
            raise UsageError(f'state {BasisState(n_a, n_b, spin)} is outside the cutoff {self.cutoff}')
        flat = n_a * self.levels + n_b
        if not self.include_spin:
            return flat
        if spin not in (config.SPIN_UP, config.SPIN_DOWN):
            raise UsageError(f'spin must be +1 or -1 (units of hbar/2), got {spin!r}')
        return flat + (0 if spin == config.SPIN_UP else self.spinless_dim)

    def state(self, index: int) -> BasisState:
        if not 0 <= index < self.dim:
            raise UsageError(f'index {index} outside 0..{self.dim - 1}')
        spin = config.SPIN_UP if index < self.spinless_dim else config.SPIN_DOWN
        n_a, n_b = divmod(index % self.spinless_dim, self.levels)
        return BasisState(n_a, n_b, spin)

    def states(self):
        return [self.state(index) for index in range(self.dim)]

    @cached_property
    def _numbers(self):
        n_a, n_b = np.divmod(np.arange(self.spinless_dim), self.levels)
        spin = np.full(self.spinless_dim, config.SPIN_UP)
        if self.include_spin:
            n_a, n_b = np.tile(n_a, 2), np.tile(n_b, 2)
            spin = np.concatenate([spin, np.full(self.spinless_dim, config.SPIN_DOWN)])
        return n_a, n_b, spin

    def occupations(self):
        """(n_a, n_b, spin) arrays over the flat index"""
        return self._numbers

    def interior_mask(self, margin: int = config.INTERIOR_MARGIN) -> np.ndarray:
        """States far enough below the cutoff that truncation cannot reach them"""
        n_a, n_b, _ = self._numbers
        return n_a + n_b <= self.cutoff - margin

    def mode_interior_mask(self) -> np.ndarray:
        """States with n_a, n_b <= cutoff - 1 (where [a, a^dagger] = 1 holds)"""
        n_a, n_b, _ = self._numbers
        return (n_a < self.cutoff) & (n_b < self.cutoff)

    def angular_labels(self) -> np.ndarray:
        """2 J_z / hbar = 2 (n_b - n_a) + 2 s_z; conserved by H0 and H'"""
        n_a, n_b, spin = self._numbers
        return 2 * (n_b - n_a) + (spin if self.include_spin else 0)

    def sectors(self) -> dict:
        """Flat indices grouped by 2 J_z, in ascending label order"""
        labels = self.angular_labels()
        return {int(label): np.flatnonzero(labels == label) for label in np.unique(labels)}


@dataclass(frozen=True)
class OscParams:
    mass: float
    omega_tilde: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.mass <= 0 or self.hbar <= 0:
            raise UsageError('mass and hbar must be positive')

    def _require_scale(self):
        if self.omega_tilde == 0:
            raise CriticalFieldError()

    @property
    def length(self) -> float:
        """sqrt(hbar / (m |omega_tilde|))"""
        self._require_scale()
        return float(np.sqrt(self.hbar / (self.mass * abs(self.omega_tilde))))

    @property
    def momentum(self) -> float:
        """sqrt(m |omega_tilde| hbar)"""
        self._require_scale()
        return float(np.sqrt(self.mass * abs(self.omega_tilde) * self.hbar))


def _lowering(levels: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, levels, dtype=float)), k=1)


def _embed(space: FockSpace, spinless_op: np.ndarray) -> ComplexMatrix:
    if space.include_spin:
        return as_matrix(np.kron(np.eye(2), spinless_op))
    return as_matrix(spinless_op)


@lru_cache(maxsize=16)
def ladder_a(space: FockSpace) -> ComplexMatrix:
    return _embed(space, np.kron(_lowering(space.levels), np.eye(space.levels)))


@lru_cache(maxsize=16)
def ladder_b(space: FockSpace) -> ComplexMatrix:
    return _embed(space, np.kron(np.eye(space.levels), _lowering(space.levels)))


def number_ops(space: FockSpace):
    """(n_a, n_b) as diagonal matrices"""
    n_a, n_b, _ = space.occupations()
    return as_matrix(np.diag(n_a.astype(float))), as_matrix(np.diag(n_b.astype(float)))


def position_ops(space: FockSpace, p: OscParams):
    """(z, zbar) with z = l (i a + b^dagger); zbar is the exact adjoint"""
    length = p.length
    a, b = ladder_a(space), ladder_b(space)
    z = as_matrix(length * (1j * a + b.T))
    return z, adjoint(z)


def momentum_ops(space: FockSpace, p: OscParams):
    """(p_z, p_zbar) with p_z = (p_x - i p_y)/2 = (s/2)(a^dagger - i b)"""
    momentum = p.momentum
    a, b = ladder_a(space), ladder_b(space)
    pz = as_matrix(0.5 * momentum * (a.T - 1j * b))
    return pz, adjoint(pz)


@dataclass(frozen=True)
class CartesianOps:
    x: ComplexMatrix
    y: ComplexMatrix
    px: ComplexMatrix
    py: ComplexMatrix


def cartesian_ops(space: FockSpace, p: OscParams) -> CartesianOps:
    """x = (z + zbar)/2, y = (z - zbar)/2i, p_x = p_z + p_zbar, p_y = i (p_z - p_zbar)"""
    z, zbar = position_ops(space, p)
    pz, pzbar = momentum_ops(space, p)
    return CartesianOps(
        x=as_matrix(0.5 * (z + zbar)),
        y=as_matrix(-0.5j * (z - zbar)),
        px=as_matrix(pz + pzbar),
        py=as_matrix(1j * (pz - pzbar)),
    )


def gup_momentum(p0: ComplexMatrix, gup_a: float) -> ComplexMatrix:
    """High-energy momentum to first order in a: p = p0 (1 - a p0)"""
    return as_matrix(p0 - gup_a * (p0 @ p0))


def angular_momentum(space: FockSpace, hbar: float = 1.0) -> ComplexMatrix:
    """L_z = hbar (n_b - n_a)"""
    n_a, n_b, _ = space.occupations()
    return as_matrix(np.diag(hbar * (n_b - n_a).astype(float)))


@lru_cache(maxsize=16)
def p_squared(space: FockSpace, p: OscParams) -> ComplexMatrix:
    """p^2 = 4 p_z p_zbar"""
    if space.include_spin:
        return _embed(space, p_squared(space.spinless(), p))
    pz, pzbar = momentum_ops(space, p)
    return as_matrix(4.0 * (pz @ pzbar))


def p_squared_ladder_form(space: FockSpace, p: OscParams) -> ComplexMatrix:
    """2 m w hbar [a^dagger a + a a^dagger - (m w / 2 hbar) z zbar + L_z / hbar]

    Agrees with p_squared on the interior projection only: a a^dagger is wrong on n_a = cutoff.
    """
    if space.include_spin:
        return _embed(space, p_squared_ladder_form(space.spinless(), p))
    w = abs(p.omega_tilde)
    a = ladder_a(space)
    z, zbar = position_ops(space, p)
    lz = angular_momentum(space, p.hbar)
    bracket = a.T @ a + a @ a.T - (p.mass * w / (2 * p.hbar)) * (z @ zbar) + lz / p.hbar
    return as_matrix(2 * p.mass * w * p.hbar * bracket)


def ladder_terms(space: FockSpace, p: OscParams) -> dict:
    """The three pieces of the p^2 decomposition: ladder, z zbar and L_z terms (they sum to p^2)"""
    w = abs(p.omega_tilde)
    a = ladder_a(space)
    z, zbar = position_ops(space, p)
    lz = angular_momentum(space, p.hbar)
    return {
        'ladder': as_matrix(2 * p.mass * w * p.hbar * (a.T @ a + a @ a.T)),
        'zzbar': as_matrix(-(p.mass * w) ** 2 * (z @ zbar)),
        'lz': as_matrix(2 * p.mass * w * lz),
    }


def paper_annihilation(space: FockSpace, p: OscParams) -> ComplexMatrix:
    """p_zbar / sqrt(m w hbar) - (i/2) sqrt(m w / hbar) z, as printed; equals ladder_a"""
    z, _ = position_ops(space, p)
    _, pzbar = momentum_ops(space, p)
    return as_matrix(pzbar / p.momentum - 0.5j * z / p.length)


def paper_creation(space: FockSpace, p: OscParams) -> ComplexMatrix:
    """p_z / sqrt(m w hbar) - (i/2) sqrt(m w / hbar) zbar, as printed; equals -i b, not a^dagger"""
    _, zbar = position_ops(space, p)
    pz, _ = momentum_ops(space, p)
    return as_matrix(pz / p.momentum - 0.5j * zbar / p.length)


def embed_spinor(upper: ComplexMatrix, lower: ComplexMatrix,
                 off_ur: ComplexMatrix, off_ll: ComplexMatrix) -> ComplexMatrix:
    """Block matrix [[upper, off_ur], [off_ll, lower]] in the (s, n_a, n_b) ordering"""
    dim = upper.shape[0]
    for block in (lower, off_ur, off_ll):
        if block.shape != upper.shape:
            raise DimensionMismatchError(dim, block.shape[0], 'embed_spinor')
    return as_matrix(np.block([[upper, off_ur], [off_ll, lower]]))
