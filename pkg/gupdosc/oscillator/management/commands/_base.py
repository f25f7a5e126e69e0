from django.core.management import BaseCommand, CommandError

from oscillator import config
from oscillator.cli.config import add_run_arguments, resolve_config
from oscillator.cli.runner import run
from oscillator.exceptions import UsageError


class ReportCommand(BaseCommand):
    """A solver command: parse the run configuration, run it, turn the exit status into a CommandError"""
    requires_system_checks = []
    command_name = None

    def add_arguments(self, parser):
        add_run_arguments(parser)

    def handle(self, *args, **options):
        try:
            run_config = resolve_config(self.command_name, options)
            status, message = run(run_config, self.stdout)
        except UsageError as error:
            raise CommandError(str(error), returncode=config.EXIT_USAGE)
        if status != config.EXIT_OK:
            raise CommandError(message, returncode=status)
