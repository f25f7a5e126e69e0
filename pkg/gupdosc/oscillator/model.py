"""Dirac oscillator in a magnetic field: parameters, Landau spectrum, spinor states and Hamiltonians.

H0 is assembled in Hermitian form

    H0 = [[ m c^2,                  c (2 p_z + i m w zbar) ],
          [ c (2 p_zbar - i m w z), -m c^2                 ]]

with w the signed reduced frequency and the Fock operators built on the |w| scale.
For w > 0 the upper-right block is 2 c s a^dagger (mode a couples), for w < 0 it is
-2 i c s b (mode b couples and the unpaired tower sits at -m c^2).
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import config
from .exceptions import BranchCollapseError, UsageError
from .fock import FockSpace, OscParams, embed_spinor, momentum_ops, p_squared, position_ops
from .numerics import ComplexMatrix, adjoint, as_matrix, mat_add, zeros


logger = logging.getLogger(__name__)


def _positive(name, value):
    if not np.isfinite(value) or value <= 0:
        raise UsageError(f'{name} must be a positive finite number, got {value!r}')


@dataclass(frozen=True)
class ModelParams:
    mass: float = 1.0
    light_speed: float = 1.0
    hbar: float = 1.0
    omega: float = 1.0
    B: float = 0.0
    charge_mag: float = 1.0
    gup_a: float = 0.0

    def __post_init__(self):
        for name in ('mass', 'light_speed', 'hbar', 'charge_mag'):
            _positive(name, getattr(self, name))
        if not np.isfinite(self.omega) or self.omega < 0:
            raise UsageError(f'omega must be a nonnegative finite number, got {self.omega!r}')
        if not np.isfinite(self.B):
            raise UsageError(f'B must be finite, got {self.B!r}')
        if not np.isfinite(self.gup_a) or self.gup_a < 0:
            raise UsageError(f'gup_a must be a nonnegative finite number, got {self.gup_a!r}')

    @property
    def omega_c(self) -> float:
        """Cyclotron frequency |e| B / (m c)"""
        return self.charge_mag * self.B / (self.mass * self.light_speed)

    @property
    def omega_tilde(self) -> float:
        return self.omega - self.omega_c / 2

    @property
    def lam(self) -> float:
        """hbar omega_tilde / (m c^2)"""
        return self.hbar * self.omega_tilde / self.rest_energy

    @property
    def alpha_gup(self) -> float:
        """Dimensionless GUP strength a m c"""
        return self.gup_a * self.mass * self.light_speed

    @property
    def rest_energy(self) -> float:
        return self.mass * self.light_speed ** 2

    @property
    def shift_unit(self) -> float:
        """c m hbar |omega_tilde|: first-order shifts are reported as multiples of a times this"""
        return self.light_speed * self.mass * self.hbar * abs(self.omega_tilde)

    def replace(self, **changes) -> 'ModelParams':
        values = {name: getattr(self, name) for name in self.__dataclass_fields__}
        values.update(changes)
        return ModelParams(**values)

    def to_dict(self) -> dict:
        return {
            'mass': self.mass,
            'light_speed': self.light_speed,
            'hbar': self.hbar,
            'omega': self.omega,
            'B': self.B,
            'charge_mag': self.charge_mag,
            'gup_a': self.gup_a,
            'omega_c': self.omega_c,
            'omega_tilde': self.omega_tilde,
            'lambda': self.lam,
            'alpha_gup': self.alpha_gup,
        }


def reduced_frequency(p: ModelParams) -> float:
    return p.omega_tilde


def chirality(p: ModelParams) -> int:
    """+1 when mode a couples (w > 0), -1 when mode b couples (w < 0), 0 at the critical field"""
    return int(np.sign(p.omega_tilde))


def oscillator_scale(p: ModelParams) -> OscParams:
    """Fock-basis scale: |w|, falling back to omega and then to m c^2 / hbar at w = 0"""
    scale = abs(p.omega_tilde) or p.omega or p.rest_energy / p.hbar
    return OscParams(mass=p.mass, omega_tilde=scale, hbar=p.hbar)


def _check_branch(branch):
    if branch not in config.BRANCHES:
        raise UsageError(f'branch must be one of {config.BRANCHES}, got {branch!r}')


def _check_level(n):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 0:
        raise UsageError(f'level index must be a nonnegative integer, got {n!r}')


def landau_level(p: ModelParams, n: int, branch: str = config.PLUS) -> float:
    """Relativistic Landau level +-m c^2 sqrt(1 + 4 lambda n), literal in the signed lambda.

    Raises BranchCollapseError when the radicand is negative (over-critical field).
    """
    _check_level(n)
    _check_branch(branch)
    radicand = 1.0 + 4.0 * p.lam * n
    if radicand < 0:
        raise BranchCollapseError(n, radicand)
    sign = 1.0 if branch == config.PLUS else -1.0
    return sign * p.rest_energy * float(np.sqrt(radicand))


def level_energy(p: ModelParams, n: int, branch: str = config.PLUS) -> float:
    """Level of the Hermitian model: +-m c^2 sqrt(1 + 4 hbar |w| n / m c^2); equals landau_level for w >= 0"""
    _check_level(n)
    _check_branch(branch)
    sign = 1.0 if branch == config.PLUS else -1.0
    return sign * p.rest_energy * float(np.sqrt(1.0 + 4.0 * abs(p.lam) * n))


@dataclass(frozen=True)
class SpinorLevel:
    n: int
    branch: str
    energy: float
    c_n: float
    d_n: float
    n_spectator: int = 0
    chirality: int = 1
    label: str = field(default='', compare=False)

    def __post_init__(self):
        if abs(self.c_n ** 2 + self.d_n ** 2 - 1.0) > 1e-12:
            raise UsageError(f'spinor coefficients not normalized: c={self.c_n!r}, d={self.d_n!r}')
        if not self.label:
            object.__setattr__(self, 'label', f'n={self.n}, branch {self.branch}, spectator {self.n_spectator}')


def spinor_level(p: ModelParams, n: int, branch: str = config.PLUS, n_spectator: int = 0) -> SpinorLevel:
    """Energy and spinor coefficients of level n.

    c_n = +-sqrt((E + +-m c^2) / 2E), d_n = sqrt((E -+ m c^2) / 2E) with E = |level energy|.
    The unpaired n = 0 state only exists on the + branch for w >= 0 and on the - branch for w < 0.

    Params:
        n_spectator (int): occupation of the mode that does not enter H0

    """
    _check_level(n)
    _check_level(n_spectator)
    _check_branch(branch)
    hand = chirality(p) or 1
    if n == 0 and branch != (config.PLUS if hand > 0 else config.MINUS):
        raise UsageError(
            f'the n=0 state has no {branch} branch at this field (omega_tilde = {p.omega_tilde!r})'
        )
    energy = level_energy(p, n, branch)
    magnitude = abs(energy)
    sign = 1.0 if branch == config.PLUS else -1.0
    c_n = sign * float(np.sqrt(max(magnitude + sign * p.rest_energy, 0.0) / (2 * magnitude)))
    d_n = float(np.sqrt(max(magnitude - sign * p.rest_energy, 0.0) / (2 * magnitude)))
    c_n += 0.0  # no negative zero in reports
    return SpinorLevel(n=n, branch=branch, energy=energy, c_n=c_n, d_n=d_n,
                       n_spectator=n_spectator, chirality=hand)


def spinor_components(level: SpinorLevel):
    """[(n_a, n_b, spin, amplitude)] of the level's nonzero components"""
    n, m = level.n, level.n_spectator
    if level.chirality >= 0:
        components = [(n, m, config.SPIN_UP, complex(level.c_n))]
        if n > 0:
            components.append((n - 1, m, config.SPIN_DOWN, complex(level.d_n)))
    else:
        components = [(m, n, config.SPIN_DOWN, 1j * level.d_n)]
        if n > 0:
            components.insert(0, (m, n - 1, config.SPIN_UP, complex(level.c_n)))
    return [component for component in components if component[3] != 0]


def spinor_state(space: FockSpace, p: ModelParams, level: SpinorLevel) -> np.ndarray:
    """Normalized state vector of a spinor level in the truncated basis"""
    if not space.include_spin:
        raise UsageError('spinor states need a space with spin')
    if level.chirality != (chirality(p) or 1):
        raise UsageError('spinor level was built for a field of the opposite chirality')
    state = np.zeros(space.dim, dtype=np.complex128)
    for n_a, n_b, spin, amplitude in spinor_components(level):
        state[space.index(n_a, n_b, spin)] = amplitude
    state.flags.writeable = False
    return state


@lru_cache(maxsize=8)
def coupling_block(space: FockSpace, p: ModelParams) -> ComplexMatrix:
    """Spinless upper-right block c (2 p_z + i m w zbar)"""
    spinless = space.spinless()
    scale = oscillator_scale(p)
    pz, _ = momentum_ops(spinless, scale)
    block = 2.0 * pz
    if p.omega_tilde != 0:
        _, zbar = position_ops(spinless, scale)
        block = block + 1j * p.mass * p.omega_tilde * zbar
    return as_matrix(p.light_speed * block)


def _require_spin(space: FockSpace):
    if not space.include_spin:
        raise UsageError('the Dirac Hamiltonian needs a space with spin')


def build_h0(space: FockSpace, p: ModelParams) -> ComplexMatrix:
    _require_spin(space)
    upper_right = coupling_block(space, p)
    rest = p.rest_energy * np.eye(space.spinless_dim)
    return embed_spinor(as_matrix(rest), as_matrix(-rest), upper_right, adjoint(upper_right))


def perturbation_operator(space: FockSpace, p: ModelParams) -> ComplexMatrix:
    """dH/da = -c p^2 on both spinor components; identically zero at the critical field"""
    _require_spin(space)
    if p.omega_tilde == 0:
        return zeros(space.dim)
    return as_matrix(-p.light_speed * p_squared(space, oscillator_scale(p)))


def build_h_prime(space: FockSpace, p: ModelParams) -> ComplexMatrix:
    return as_matrix(p.gup_a * perturbation_operator(space, p))


def build_full(space: FockSpace, p: ModelParams) -> ComplexMatrix:
    return mat_add(build_h0(space, p), build_h_prime(space, p))


def sector_hamiltonian(space: FockSpace, p: ModelParams, indices, gup_a: float = None) -> ComplexMatrix:
    """H0 + a V restricted to a set of flat indices, without assembling the full matrix.

    Params:
        gup_a (float): GUP parameter to use instead of p.gup_a (may be negative for the oracle stencil)

    """
    _require_spin(space)
    gup_a = p.gup_a if gup_a is None else gup_a
    indices = np.asarray(indices, dtype=np.intp)
    half = space.spinless_dim
    upper = indices < half
    orbital = indices % half

    block = coupling_block(space, p)
    matrix = np.zeros((len(indices), len(indices)), dtype=np.complex128)
    matrix[np.ix_(upper, ~upper)] = block[np.ix_(orbital[upper], orbital[~upper])]
    matrix[np.ix_(~upper, upper)] = block.conj().T[np.ix_(orbital[~upper], orbital[upper])]
    matrix[np.diag_indices(len(indices))] = np.where(upper, p.rest_energy, -p.rest_energy)

    if gup_a and p.omega_tilde != 0:
        p2 = p_squared(space.spinless(), oscillator_scale(p))
        same = np.equal.outer(upper, upper)
        matrix -= gup_a * p.light_speed * np.where(same, p2[np.ix_(orbital, orbital)], 0.0)
    return as_matrix(matrix)
