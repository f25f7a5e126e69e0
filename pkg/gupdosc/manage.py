#!/usr/bin/env python
"""Command-line entry point: `manage.py <command>` runs a solver command or the test suite."""
import os
import sys


def main(argv=None):
    """Run a solver command."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'gupdosc.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    execute_from_command_line(sys.argv if argv is None else argv)


if __name__ == '__main__':
    main()
