from oscillator import config

from ._base import ReportCommand


class Command(ReportCommand):
    help = 'First-order GUP shifts of single levels, checked by exact diagonalization'
    command_name = config.CORRECT
