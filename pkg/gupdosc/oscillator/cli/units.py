"""SI input conversion. The solver itself only ever sees natural units."""
from scipy import constants

from .. import config
from ..exceptions import UsageError
from ..model import ModelParams


# Electron defaults for --units si
SI_DEFAULTS = {
    'mass': constants.m_e,
    'light_speed': constants.c,
    'hbar': constants.hbar,
    'charge_mag': constants.e,
}
NATURAL_DEFAULTS = {
    'mass': 1.0,
    'light_speed': 1.0,
    'hbar': 1.0,
    'charge_mag': 1.0,
}


def unit_defaults(units: str) -> dict:
    if units == config.SI_UNITS:
        return dict(SI_DEFAULTS)
    if units == config.NATURAL_UNITS:
        return dict(NATURAL_DEFAULTS)
    raise UsageError(f'unknown unit system {units!r}, expected one of {config.UNIT_SYSTEMS}')


def si_to_natural(omega: float, B: float, gup_a: float, mass: float, light_speed: float,
                  hbar: float, charge_mag: float) -> ModelParams:
    """Natural-unit parameters (m = c = hbar = |e| = 1) for SI inputs.

    omega -> hbar omega / m c^2, B -> hbar |e| B / m^2 c^2 (SI cyclotron frequency |e| B / m),
    a -> a m c.
    """
    for name, value in (('mass', mass), ('light_speed', light_speed), ('hbar', hbar),
                        ('charge_mag', charge_mag)):
        if not value > 0:
            raise UsageError(f'{name} must be positive, got {value!r}')
    return ModelParams(
        omega=hbar * omega / (mass * light_speed ** 2),
        B=hbar * charge_mag * B / (mass * light_speed) ** 2,
        gup_a=gup_a * mass * light_speed,
    )
