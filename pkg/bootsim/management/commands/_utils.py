import inspect
import logging

from django.core.management.base import CommandError, CommandParser

from bootsim.config import load_run_config
from bootsim.exceptions import SimulationError

logger = logging.getLogger("bootsim.commands")


def add_run_arguments(parser: CommandParser):
    """
    Positional config path plus the flags that override top-level JSON fields.
    """

    parser.add_argument("config_path", metavar="config", help="JSON run configuration")
    parser.add_argument("--seed", type=int, default=None, help="Override the master seed")
    parser.add_argument("--threads", type=int, default=None, help="Override the worker count (0 = one per CPU)")
    parser.add_argument("--output-dir", dest="output_dir", default=None, help="Override the output directory")


def command(function):
    """
    Decorator for all simulator commands, loads the run configuration and maps simulator errors to exit codes.

    The decorated handle() may have a config (RunConfig, flags already applied) or threads (resolved worker count)
    parameter with **options.

    Configuration problems (malformed JSON, missing or mistyped fields, invalid values, unsupported DGP) exit with
    code 2 and a message naming the line or the field:
        CommandError: Field experiment.n is missing

    Numerical failures exit with code 1 and carry the coordinates of the failing replication:
        CommandError: Replication (3, 17) failed: Regressor matrix is rank deficient

    Any other exception propagates with its traceback.
    """

    def decorated(self, *args, **options):
        try:
            parameters = inspect.signature(function).parameters

            if "config" in parameters:
                config = load_run_config(options["config_path"]).with_overrides(
                    seed=options.get("seed"),
                    threads=options.get("threads"),
                    output_dir=options.get("output_dir"),
                )
                options["config"] = config

                if "threads" in parameters:
                    options["threads"] = config.resolved_threads()

            return function(self, *args, **options)

        except SimulationError as e:
            raise CommandError(e.get_message(), returncode=e.code)

    return decorated
