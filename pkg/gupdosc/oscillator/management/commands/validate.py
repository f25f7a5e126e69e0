from oscillator import config

from ._base import ReportCommand


class Command(ReportCommand):
    help = 'Replicate the published results (exit status 1 on unexpected discrepancies)'
    command_name = config.VALIDATE
