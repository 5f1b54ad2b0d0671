from django.core.management.base import BaseCommand

from bootsim.exceptions import SimulationError
from bootsim.management.commands._utils import command
from bootsim.selftest import run_invariants, format_table


class Command(BaseCommand):
    help = "Run the fast invariant suite and print a pass/fail table"

    @command
    def handle(self, **options):
        """
        manage.py selftest

        Runs every registered invariant once. Exit code 0 iff all pass, 1 otherwise.
        """

        results = run_invariants()
        self.stdout.write(format_table(results))

        failed = [result.name for result in results if not result.passed]
        if failed:
            raise SimulationError(f"{len(failed)} invariant(s) failed: {', '.join(failed)}")
