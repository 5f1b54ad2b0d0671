from django.core.management.base import BaseCommand

from bootsim.diagnostics import UniformityReport
from bootsim.exceptions import ConfigError
from bootsim.management.commands._utils import add_run_arguments, command, logger
from bootsim.mc import run_unconditional
from bootsim.output import write_csv, write_json, metadata, pvalue_frame
from bootsim.specs import RunConfig, UnconditionalMode


class Command(BaseCommand):
    help = "Replicate an experiment unconditionally and report the uniformity of its bootstrap p-values"

    def add_arguments(self, parser):
        add_run_arguments(parser)

    @command
    def handle(self, config: RunConfig, threads: int, **options):
        """
        manage.py run <config> [--seed S] [--threads T] [--output-dir DIR]

        Needs ``mode.kind = unconditional``. Writes to the output directory:

        pvalues.csv (+ pvalues.csv.meta.json)
            rep,pvalue
            0,0.4123...
            ...

        report.json
        {
            "uniformity": {
                "ks_to_uniform": 0.031,
                "rejection_rates": {"0.01": 0.012, "0.05": 0.049, "0.1": 0.102},
                "n_pvalues": 1000
            },
            "metadata": {"seed": 1, "version": "1.0.0", "config_hash": "...", ...}
        }

        Exit code 2 on configuration errors, 1 on numerical failures.
        """

        if not isinstance(config.mode, UnconditionalMode):
            raise ConfigError("Field mode.kind must be \"unconditional\" for the run command")

        experiment = config.experiment
        logger.info("Running %s / %s on %s, n = %d, %d replications, %d threads",
                    experiment.statistic, experiment.scheme.kind, experiment.dgp.kind, experiment.n,
                    config.mode.reps, threads)

        pvalues = run_unconditional(experiment, config.mode.reps, config.master_seed, threads)
        report = UniformityReport.from_pvalues(pvalues, config.levels)

        write_csv(pvalue_frame(pvalues), config.output_dir, "pvalues.csv", config)
        write_json({"uniformity": report.to_struct(), "metadata": metadata(config)}, config.output_dir, "report.json")

        rates = ", ".join(f"{q:g}: {rate:.4f}" for q, rate in report.rejection_rates.items())
        self.stdout.write(f"KS distance to U(0,1): {report.ks_to_uniform:.4f}; rejection rates {rates}")
