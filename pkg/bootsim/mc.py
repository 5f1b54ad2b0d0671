"""
Monte Carlo harness: unconditional replication loops and the double (conditional-on-regressors) design.

Seed plan, all paths under one master seed:

- unconditional rep r: sample on ``[r, 0]``, bootstrap replicate b on ``[r, 1, b]``;
- double design: regressor path m on ``[m, 0]``, conditional response v (1-based) on ``[m, v]``, bootstrap
  replicate b on ``[m, v, b]``.

Outer replications (r or m) run on a thread pool; each touches only its own streams and its own result slot and the
results are collected in order, so output never depends on the schedule.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from django.conf import settings

from bootsim.bootstrap import (
    pvalue, fixed_design_gaussian, permutation_cusum, parametric_ks, boundary_wild, supf_wild, null_law,
)
from bootsim.dgp import SampleDraw, simulate, simulate_conditional
from bootsim.diagnostics import ecdf
from bootsim.estimators import AffineConstraint, ols, constrained_ols
from bootsim.exceptions import SimulationError, ReplicationError, UnsupportedDgpError
from bootsim.rngkit import derive_stream, replicate_streams
from bootsim.specs import Experiment, FixedDesignGaussian, PermutationCusum, CONDITIONAL_KINDS
from bootsim.statistics import slope_stat, cusum_stat, ks_stat, boundary_stat, sup_f, BreakWorkspace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConditionalEcdfPanel:
    """
    Row m holds the empirical cdf, on ``grid``, of the N p-values drawn with regressor path m held fixed.

    ``pvalues`` (M x N) is only kept when the run asks for it.
    """

    grid: np.ndarray
    cdf_values: np.ndarray
    n_inner: int
    pvalues: np.ndarray | None = None

    def __post_init__(self):
        if self.cdf_values.shape != (self.m, self.grid.size):
            raise SimulationError(f"Panel has shape {self.cdf_values.shape} for a grid of {self.grid.size}")

        if np.any(np.diff(self.cdf_values, axis=1) < 0):
            raise SimulationError("Panel row is not a nondecreasing cdf")

        if np.any(self.cdf_values < 0) or np.any(self.cdf_values > 1):
            raise SimulationError("Panel value outside [0, 1]")

    @property
    def m(self) -> int:
        return self.cdf_values.shape[0]


def _needs_streams(experiment: Experiment) -> bool:
    variant = experiment.scheme.variant
    if isinstance(variant, FixedDesignGaussian):
        return not variant.analytic
    if isinstance(variant, PermutationCusum):
        return not variant.enumerates(experiment.n)
    return True


def _constraint(experiment: Experiment) -> AffineConstraint:
    a, b, c = experiment.constraint
    return AffineConstraint(np.asarray(a), b, c)


def compute_pvalue(experiment: Experiment, draw: SampleDraw, master_seed: int, prefix: Sequence[int]) -> float:
    """
    Bootstrap p-value of the experiment's statistic on one sample; replicate b uses stream ``prefix + [b]``.
    """

    scheme = experiment.scheme.variant
    streams = replicate_streams(master_seed, prefix, scheme.b) if _needs_streams(experiment) else []
    n = draw.n

    if experiment.statistic == "slope":
        fit = ols(draw.y, draw.x)
        tau = slope_stat(fit, experiment.beta0, experiment.alpha_exp, n)
        dist = fixed_design_gaussian(draw, fit, scheme, streams, experiment.alpha_exp)

    elif experiment.statistic == "cusum":
        e = ols(draw.y, draw.x).residuals if scheme.target == "residuals" else draw.eps
        tau = cusum_stat(e, scheme.nu_choice)
        dist = permutation_cusum(e, scheme, streams)

    elif experiment.statistic == "ks":
        law = null_law(scheme)
        residuals = ols(draw.y, draw.x).residuals if draw.x.shape[1] else draw.y
        tau = ks_stat(residuals, law.cdf)
        dist = parametric_ks(draw, law, scheme, streams)

    elif experiment.statistic == "boundary":
        con = _constraint(experiment)
        fit = constrained_ols(draw.y, draw.x, con)
        tau = boundary_stat(fit.coef, con, n)
        dist = boundary_wild(draw, fit, con, scheme, streams)

    else:
        workspace = BreakWorkspace(draw.x, scheme.r_lo, scheme.r_hi)
        tau = sup_f(draw.y, draw.x, scheme.r_lo, scheme.r_hi, workspace)
        dist = supf_wild(draw, tau.aux, scheme, streams, workspace)

    return pvalue(dist, tau.value, experiment.tail)


def _map_outer(function: Callable[[int], object], count: int, threads: int, label: str) -> list:
    """
    ``[function(i) for i in range(count)]`` on a thread pool, collected in order and logged per chunk.
    """

    chunk = max(int(settings.RANDBOOT_CHUNK_SIZE), 1)
    results = []
    with ThreadPoolExecutor(max_workers=max(threads, 1)) as executor:
        for start in range(0, count, chunk):
            stop = min(start + chunk, count)
            results.extend(executor.map(function, range(start, stop)))
            logger.info("%s: %d/%d outer replications done", label, stop, count)

    return results


def run_unconditional(experiment: Experiment, reps: int, master_seed: int, threads: int = 1) -> np.ndarray:
    """
    ``reps`` independent p-values of the experiment (data and bootstrap redrawn each time).
    """

    if reps < 1:
        raise SimulationError("At least one replication is required", code=2)

    spec = experiment.effective_dgp()

    def replication(r: int) -> float:
        try:
            draw = simulate(spec, derive_stream(master_seed, [r, 0]))
            return compute_pvalue(experiment, draw, master_seed, [r, 1])
        except SimulationError as error:
            raise ReplicationError((r,), error)

    return np.asarray(_map_outer(replication, reps, threads, "unconditional"))


def conditional_pvalues(experiment: Experiment, m: int, inner: int, master_seed: int) -> np.ndarray:
    """
    p-values of ``inner`` responses redrawn conditionally on regressor path m.
    """

    spec = experiment.effective_dgp()
    base = simulate(spec, derive_stream(master_seed, [m, 0]))

    pvalues = np.empty(inner)
    for v in range(1, inner + 1):
        try:
            draw = simulate_conditional(spec, base, derive_stream(master_seed, [m, v]))
            pvalues[v - 1] = compute_pvalue(experiment, draw, master_seed, [m, v])
        except SimulationError as error:
            raise ReplicationError((m, v), error)

    return pvalues


def run_double(experiment: Experiment, outer: int, inner: int, grid: np.ndarray, master_seed: int,
               threads: int = 1, keep_pvalues: bool = False) -> ConditionalEcdfPanel:
    """
    Double Monte Carlo design: ``outer`` regressor paths, ``inner`` conditional response draws per path.
    """

    if outer < 1 or inner < 1:
        raise SimulationError("Double design needs at least one outer and one inner replication", code=2)

    if experiment.dgp.kind not in CONDITIONAL_KINDS:
        raise UnsupportedDgpError(experiment.dgp.kind)

    rows = _map_outer(lambda m: conditional_pvalues(experiment, m, inner, master_seed), outer, threads, "double")
    pvalues = np.vstack(rows)

    return ConditionalEcdfPanel(
        grid=np.asarray(grid, dtype=float),
        cdf_values=np.vstack([ecdf(row, grid) for row in pvalues]),
        n_inner=inner,
        pvalues=pvalues if keep_pvalues else None,
    )
