import pandas as pd
from django.core.management.base import BaseCommand

from bootsim.diagnostics import (
    rejection_rate, simulate_mixing_variable, conditional_local_power, asymptotic_power_oracle,
)
from bootsim.exceptions import ConfigError
from bootsim.management.commands._utils import add_run_arguments, command, logger
from bootsim.mc import run_unconditional
from bootsim.output import write_csv
from bootsim.rngkit import derive_stream
from bootsim.specs import RunConfig, UnconditionalMode

# Monte Carlo paths all have two or more entries, a one-entry path keeps the oracle stream apart
ORACLE_STREAM_PATH = (0,)


class Command(BaseCommand):
    help = "Compare Monte Carlo local power of the bootstrap slope test with its asymptotic oracle"

    def add_arguments(self, parser):
        add_run_arguments(parser)

    @command
    def handle(self, config: RunConfig, threads: int, **options):
        """
        manage.py power <config> [--seed S] [--threads T] [--output-dir DIR]

        Needs the slope statistic, ``mode.kind = unconditional`` and a ``power`` block:
        {
            "b_grid": [0, -2, -5, -10],
            "oracle_paths": 100000,
            "oracle_steps": 1000
        }

        For every b the DGP slope is set to b / n and the test at ``experiment.level`` is replicated; the same seed
        plan is used for every b. One set of Brownian functionals M is shared by all oracle columns.

        power.csv (+ sidecar)
            b,mc_rejection_rate,oracle,standard_test_oracle,reps
        """

        if config.power is None:
            raise ConfigError("Field power is missing")

        if not isinstance(config.mode, UnconditionalMode):
            raise ConfigError("Field mode.kind must be \"unconditional\" for the power command")

        experiment = config.experiment
        if experiment.statistic != "slope":
            raise ConfigError("Field experiment.statistic must be \"slope\" for the power command")

        level = experiment.level
        mixing = simulate_mixing_variable(config.power.oracle_paths, config.power.oracle_steps,
                                          derive_stream(config.master_seed, ORACLE_STREAM_PATH))

        rows = []
        for b in config.power.b_grid:
            logger.info("Local alternative b = %g", b)
            pvalues = run_unconditional(experiment.at_local_alternative(b), config.mode.reps, config.master_seed,
                                        threads)
            rows.append({
                "b": b,
                "mc_rejection_rate": rejection_rate(pvalues, level),
                "oracle": float(conditional_local_power(b, level, mixing).mean()),
                "standard_test_oracle": asymptotic_power_oracle(b, level, mixing),
                "reps": config.mode.reps,
            })

        frame = pd.DataFrame(rows)
        write_csv(frame, config.output_dir, "power.csv", config)
        self.stdout.write(frame.to_string(index=False))
