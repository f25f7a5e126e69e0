from oscillator import config

from ._base import ReportCommand


class Command(ReportCommand):
    help = 'GUP shifts and degeneracy counts over a range of magnetic fields'
    command_name = config.SCAN
