from oscillator import config

from ._base import ReportCommand


class Command(ReportCommand):
    help = 'Relativistic Landau levels next to the exact spectrum of H0'
    command_name = config.SPECTRUM
