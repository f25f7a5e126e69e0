"""Run configuration: flags > configuration file > built-in defaults."""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from django.core.management.base import CommandError, CommandParser

from .. import config
from ..exceptions import UsageError
from ..model import ModelParams
from .messages import get_message
from .units import si_to_natural, unit_defaults


# configuration key -> (flag, type)
OPTIONS = {
    'omega': ('--omega', float),
    'B': ('--B', float),
    'gup_a': ('--gup-a', float),
    'mass': ('--mass', float),
    'light_speed': ('--c', float),
    'hbar': ('--hbar', float),
    'charge_mag': ('--charge', float),
    'cutoff': ('--cutoff', int),
    'levels': ('--levels', int),
    'branch': ('--branch', str),
    'B_min': ('--B-min', float),
    'B_max': ('--B-max', float),
    'steps': ('--steps', int),
    'format': ('--format', str),
    'output': ('--output', str),
    'units': ('--units', str),
    'cluster_level': ('--cluster-level', int),
    'cluster_size': ('--cluster-size', int),
}
CHOICES = {
    'branch': (config.PLUS, config.MINUS, config.BOTH),
    'format': config.FORMATS,
    'units': config.UNIT_SYSTEMS,
}
FILE_ONLY_KEYS = ('command', 'tolerances')

DEFAULTS = {
    'omega': 1.0,
    'B': 0.0,
    'gup_a': 0.0,
    'cutoff': config.DEFAULT_CUTOFF,
    'levels': config.DEFAULT_LEVELS,
    'branch': config.PLUS,
    'B_min': None,
    'B_max': None,
    'steps': None,
    'format': config.TEXT,
    'output': None,
    'units': config.NATURAL_UNITS,
    'cluster_level': config.DEFAULT_CLUSTER_LEVEL,
    'cluster_size': config.DEFAULT_CLUSTER_SIZE,
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    omega: float
    B: float
    gup_a: float
    mass: float
    light_speed: float
    hbar: float
    charge_mag: float
    cutoff: int
    levels: int
    branch: str
    B_min: Optional[float]
    B_max: Optional[float]
    steps: Optional[int]
    format: str
    output: Optional[str]
    units: str
    cluster_level: int
    cluster_size: int
    tolerances: dict = field(default_factory=lambda: dict(config.TOLERANCES))

    @property
    def params(self) -> ModelParams:
        """Model parameters in natural units"""
        if self.units == config.SI_UNITS:
            return si_to_natural(self.omega, self.B, self.gup_a, self.mass, self.light_speed,
                                 self.hbar, self.charge_mag)
        return ModelParams(mass=self.mass, light_speed=self.light_speed, hbar=self.hbar, omega=self.omega,
                           B=self.B, charge_mag=self.charge_mag, gup_a=self.gup_a)

    def natural_field(self, B: float) -> float:
        if self.units == config.SI_UNITS:
            return si_to_natural(self.omega, B, self.gup_a, self.mass, self.light_speed,
                                 self.hbar, self.charge_mag).B
        return B

    @property
    def branches(self) -> tuple:
        return config.BRANCHES if self.branch == config.BOTH else (self.branch,)

    def B_values(self) -> list:
        return [float(B) for B in np.linspace(self.B_min, self.B_max, self.steps)]

    def to_dict(self) -> dict:
        """Fully resolved configuration; valid as a configuration file"""
        values = {'command': self.command}
        values.update({key: getattr(self, key) for key in OPTIONS})
        values['tolerances'] = dict(self.tolerances)
        return values


def add_run_arguments(parser):
    parser.add_argument('--config', dest='config_file', default=None,
                        help='JSON configuration file (flags override its values)')
    for key, (flag, kind) in OPTIONS.items():
        parser.add_argument(flag, dest=key, type=kind, default=None, choices=CHOICES.get(key))
    parser.add_argument('--tol', dest='tol', action='append', default=None, metavar='NAME=VALUE',
                        help='tolerance override, repeatable')


def read_config_file(path) -> dict:
    try:
        values = json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, ValueError) as error:
        raise UsageError(get_message('config_file_message', path=path, error=error))
    if not isinstance(values, dict):
        raise UsageError(get_message('config_file_message', path=path, error='not a JSON object'))
    return values


def _parse_tolerances(pairs) -> dict:
    tolerances = {}
    for pair in pairs or []:
        name, separator, value = pair.partition('=')
        if not separator:
            raise UsageError(get_message('tolerance_format_message', value=pair))
        try:
            tolerances[name.strip()] = float(value)
        except ValueError:
            raise UsageError(get_message('tolerance_format_message', value=pair))
    return tolerances


def _check_tolerances(tolerances: dict) -> dict:
    resolved = dict(config.TOLERANCES)
    for name, value in tolerances.items():
        if name not in config.TOLERANCES:
            raise UsageError(get_message('unknown_tolerance_message', name=name, names=sorted(config.TOLERANCES)))
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value) or value <= 0:
            raise UsageError(f'tolerance {name} must be a positive number, got {value!r}')
        resolved[name] = float(value)
    return resolved


def _coerce(key, value):
    if value is None:
        return None
    _, kind = OPTIONS[key]
    try:
        if kind is int:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise ValueError
            return int(value)
        if kind is float:
            if isinstance(value, bool):
                raise ValueError
            value = float(value)
            if not np.isfinite(value):
                raise ValueError
            return value
    except (TypeError, ValueError):
        raise UsageError(f'{key} must be {kind.__name__}, got {value!r}')
    if key in CHOICES and value not in CHOICES[key]:
        raise UsageError(f'{key} must be one of {CHOICES[key]}, got {value!r}')
    return str(value)


def resolve_config(command: str, options: dict) -> RunConfig:
    """RunConfig from parsed options (flag values, config_file, tol)"""
    if command not in config.COMMANDS:
        raise UsageError(f'unknown command {command!r}')
    file_values = read_config_file(options['config_file']) if options.get('config_file') else {}
    unknown = sorted(set(file_values) - set(OPTIONS) - set(FILE_ONLY_KEYS))
    if unknown:
        raise UsageError(get_message('unknown_key_message', keys=', '.join(unknown)))
    if file_values.get('command', command) != command:
        raise UsageError(get_message('command_mismatch_message', found=file_values['command'], expected=command))

    values = dict(DEFAULTS)
    units = options.get('units') or file_values.get('units') or DEFAULTS['units']
    values.update(unit_defaults(_coerce('units', units)))
    for key in OPTIONS:
        if key in file_values:
            values[key] = file_values[key]
        if options.get(key) is not None:
            values[key] = options[key]
    values = {key: _coerce(key, value) for key, value in values.items()}

    tolerances = dict(file_values.get('tolerances') or {})
    if not isinstance(tolerances, dict):
        raise UsageError('tolerances must be a JSON object')
    tolerances.update(_parse_tolerances(options.get('tol')))

    run_config = RunConfig(command=command, tolerances=_check_tolerances(tolerances), **values)
    validate(run_config)
    return run_config


def validate(run: RunConfig):
    if run.cutoff < 1:
        raise UsageError(f'cutoff must be positive, got {run.cutoff}')
    if run.levels < 0:
        raise UsageError(f'levels must be nonnegative, got {run.levels}')
    if run.cutoff < run.levels + config.LEVELS_HEADROOM:
        raise UsageError(get_message('headroom_message', cutoff=run.cutoff, levels=run.levels,
                                     minimum=run.levels + config.LEVELS_HEADROOM,
                                     headroom=config.LEVELS_HEADROOM))
    if run.command == config.DEGENERATE:
        if run.cluster_level < 0 or run.cluster_size < 1:
            raise UsageError('cluster level must be nonnegative and cluster size positive')
        minimum = run.cluster_level + run.cluster_size + 2
        if run.cutoff < minimum:
            raise UsageError(get_message('cluster_headroom_message', cutoff=run.cutoff, size=run.cluster_size,
                                         level=run.cluster_level, minimum=minimum))
    if run.command == config.SCAN:
        if run.B_min is None or run.B_max is None or run.steps is None or run.steps < 2:
            raise UsageError(get_message('scan_range_message', B_min=run.B_min, B_max=run.B_max, steps=run.steps))
        if run.B_max < run.B_min:
            raise UsageError(get_message('scan_order_message', B_min=run.B_min, B_max=run.B_max))
    if run.format == config.XLSX and not run.output:
        raise UsageError(get_message('xlsx_output_message'))
    run.params  # model parameter checks


def parse_config(argv, config_file=None) -> RunConfig:
    """RunConfig from a command line such as ['spectrum', '--omega', '1']"""
    argv = list(argv)
    if not argv:
        raise UsageError(f'missing command, expected one of {config.COMMANDS}')
    command, arguments = argv[0], argv[1:]
    parser = CommandParser(prog=f'gup-dosc {command}', called_from_command_line=False)
    add_run_arguments(parser)
    try:
        options = vars(parser.parse_args(arguments))
    except CommandError as error:
        raise UsageError(str(error))
    if config_file is not None and options.get('config_file') is None:
        options['config_file'] = config_file
    return resolve_config(command, options)
