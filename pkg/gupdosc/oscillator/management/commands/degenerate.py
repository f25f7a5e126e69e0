from oscillator import config

from ._base import ReportCommand


class Command(ReportCommand):
    help = 'Degenerate perturbation theory inside a Landau level'
    command_name = config.DEGENERATE
