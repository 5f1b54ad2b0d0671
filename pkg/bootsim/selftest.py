"""
Registry of fast invariants run by ``manage.py selftest``.

Each invariant is a function that raises AssertionError (or a SimulationError) on failure. Seeds are fixed, so a
healthy build passes deterministically.
"""

import itertools
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats

from bootsim import bootstrap
from bootsim.dgp import simulate, bayes_sign_probability
from bootsim.diagnostics import fanchart
from bootsim.estimators import AffineConstraint, constrained_ols, break_fit, f_statistic
from bootsim.exceptions import SimulationError
from bootsim.mc import run_unconditional, run_double, compute_pvalue
from bootsim.rngkit import derive_stream, replicate_streams, sample_symmetric_stable
from bootsim.specs import (
    DgpSpec, SchemeSpec, Experiment, IidGaussian, EndogenousSign, BreakRegression, FixedDesignGaussian,
    PermutationCusum,
)
from bootsim.statistics import ks_stat, sup_f

SEED = 20240601

INVARIANTS: list[tuple[str, Callable[[], None]]] = []


def invariant(name: str):
    def decorator(function):
        INVARIANTS.append((name, function))
        return function

    return decorator


@dataclass(frozen=True)
class InvariantResult:
    name: str
    passed: bool
    seconds: float
    detail: str = ""


def _slope_experiment(n: int, analytic: bool = True, b: int = 999, kind=IidGaussian) -> Experiment:
    return Experiment(
        dgp=DgpSpec(kind(beta=0.0), n),
        scheme=SchemeSpec(FixedDesignGaussian(analytic=analytic, b=b, known_omega=None)),
        statistic="slope",
        tail="left",
    )


@invariant("stream_reproducibility")
def _stream_reproducibility():
    first = derive_stream(SEED, [3, 1, 7]).standard_normal(5)
    again = derive_stream(SEED, [3, 1, 7]).standard_normal(5)
    other = derive_stream(SEED, [3, 1, 8]).standard_normal(5)
    padded = derive_stream(SEED, [3, 1, 7, 0]).standard_normal(5)
    assert np.array_equal(first, again), "same path gave different draws"
    assert not np.array_equal(first, other), "sibling paths share draws"
    assert not np.array_equal(first, padded), "zero-padded path shares draws"


@invariant("permutation_sampler_uniformity")
def _permutation_sampler_uniformity():
    spec = PermutationCusum(b=6000, enumeration="sampled")
    orders = bootstrap.permutation_orders(3, spec, replicate_streams(SEED, [0], spec.b))
    codes = {order: i for i, order in enumerate(itertools.permutations(range(3)))}
    counts = np.bincount([codes[tuple(row)] for row in orders], minlength=6)
    assert stats.chisquare(counts).pvalue > 1e-3, f"permutation counts {counts.tolist()} are not uniform"


@invariant("permutation_enumeration_oracle")
def _permutation_enumeration_oracle():
    e = np.array([0.3, -1.2, 2.5, 0.7])
    spec = PermutationCusum(b=999, enumeration="full", nu_choice="one")
    draws = bootstrap.permutation_cusum(e, spec, []).draws

    expected = []
    for order in itertools.permutations(e):
        mean = sum(order) / len(order)
        partial, peak = 0.0, 0.0
        for value in order:
            partial += value - mean
            peak = max(peak, abs(partial))
        expected.append(peak)

    assert draws.size == 24, f"expected 24 permutations, got {draws.size}"
    assert np.allclose(draws, np.sort(expected), atol=1e-12), "enumerated distribution differs from brute force"


@invariant("constrained_ols_grid_oracle")
def _constrained_ols_grid_oracle():
    stream = derive_stream(SEED, [1])
    X = np.column_stack([np.ones(20), stream.standard_normal(20)])
    y = X @ np.array([0.5, -1.0]) + stream.standard_normal(20)
    con = AffineConstraint(np.array([0.0, 1.0]))

    fit = constrained_ols(y, X, con)
    assert fit.binding, "constraint should bind for a negative slope"

    # On the boundary theta_2 = 0 only theta_1 is free
    grid = np.linspace(fit.coef[0] - 1.0, fit.coef[0] + 1.0, 200001)
    objective = np.sum((y[None, :] - grid[:, None] * X[None, :, 0]) ** 2, axis=1)
    assert abs(fit.ssr - objective.min()) < 1e-6, "projection misses the boundary minimizer"
    assert con.slack(fit.coef) >= -1e-10, "constrained estimate is infeasible"


@invariant("ks_grid_oracle")
def _ks_grid_oracle():
    residuals = derive_stream(SEED, [2]).standard_normal(25)
    value = ks_stat(residuals, stats.norm.cdf).value

    ordered = np.sort(residuals)
    grid = np.concatenate([
        np.linspace(ordered[0] - 5, ordered[-1] + 5, 100000), ordered, ordered - 1e-12,
    ])
    empirical = np.searchsorted(ordered, grid, side="right") / ordered.size
    oracle = np.sqrt(ordered.size) * np.max(np.abs(empirical - stats.norm.cdf(grid)))
    assert abs(value - oracle) < 1e-6, f"KS {value} differs from grid oracle {oracle}"


@invariant("analytic_vs_empirical_gaussian")
def _analytic_vs_empirical_gaussian():
    analytic = _slope_experiment(50)
    empirical = _slope_experiment(50, analytic=False, b=100000)
    draw = simulate(analytic.dgp, derive_stream(SEED, [4, 0]))

    closed = compute_pvalue(analytic, draw, SEED, [4, 1])
    simulated = compute_pvalue(empirical, draw, SEED, [4, 1])
    assert abs(closed - simulated) < 0.01, f"analytic {closed:.4f} vs simulated {simulated:.4f}"


@invariant("thread_invariance")
def _thread_invariance():
    experiment = _slope_experiment(20, analytic=False, b=99)
    serial = run_unconditional(experiment, 30, SEED, threads=1)
    parallel = run_unconditional(experiment, 30, SEED, threads=4)
    assert np.array_equal(serial, parallel), "p-values depend on the thread count"


@invariant("double_panel_validity")
def _double_panel_validity():
    experiment = _slope_experiment(30, kind=EndogenousSign)
    grid = np.linspace(0, 1, 21)
    panel = run_double(experiment, 3, 40, grid, SEED, threads=2)
    summary = fanchart(panel, (0.05, 0.95))
    assert np.all(summary.lower_band <= summary.average_cdf + 1e-12), "average below lower band"
    assert np.all(summary.average_cdf <= summary.upper_band + 1e-12), "average above upper band"
    assert np.array_equal(panel.cdf_values, run_double(experiment, 3, 40, grid, SEED, threads=1).cdf_values), \
        "panel depends on the thread count"


@invariant("pvalue_tail_identity")
def _pvalue_tail_identity():
    dist = bootstrap.EmpiricalDistribution(np.array([1.0, 2.0, 2.0, 3.0]))
    for tau in (0.0, 2.0, 2.5, 4.0):
        total = bootstrap.pvalue(dist, tau, "left") + bootstrap.pvalue(dist, tau, "right")
        ties = np.sum(dist.draws == tau) / dist.b
        assert 1.0 - 1e-12 <= total <= 1.0 + ties + 1e-12, f"tails sum to {total} at tau = {tau}"


@invariant("stable_gaussian_limit")
def _stable_gaussian_limit():
    draws = sample_symmetric_stable(derive_stream(SEED, [5]), 2.0, 20000)
    assert stats.kstest(draws, stats.norm(scale=np.sqrt(2.0)).cdf).pvalue > 1e-3, "alpha = 2 is not N(0, 2)"


@invariant("bayes_sign_probability")
def _bayes_sign_probability():
    eta = np.array([-2.0, 0.0, 1.5])
    assert np.allclose(bayes_sign_probability(eta, 0.0), 0.5), "delta = 0 must give probability 1/2"
    assert abs(bayes_sign_probability(np.array([0.0]), 9.0)[0] - 1.0 / 11.0) < 1e-15, "eta = 0 must give 1/11"


@invariant("sup_f_max_property")
def _sup_f_max_property():
    spec = DgpSpec(BreakRegression(beta1=(0.0, 1.0), theta=(0.0, 0.0), r_star=None), 80)
    draw = simulate(spec, derive_stream(SEED, [6]))
    value = sup_f(draw.y, draw.x, 0.15, 0.85)

    for r in derive_stream(SEED, [7]).uniform(0.15, 0.85, 5):
        restricted, unrestricted = break_fit(draw.y, draw.x, r)
        assert value.value >= f_statistic(restricted, unrestricted) - 1e-8, f"sup-F below F at r = {r:.3f}"


def run_invariants() -> list[InvariantResult]:
    results = []
    for name, check in INVARIANTS:
        start = time.perf_counter()
        try:
            check()
            results.append(InvariantResult(name, True, time.perf_counter() - start))
        except (AssertionError, SimulationError) as e:
            detail = e.get_message() if isinstance(e, SimulationError) else str(e)
            results.append(InvariantResult(name, False, time.perf_counter() - start, detail))

    return results


def format_table(results: list[InvariantResult]) -> str:
    width = max(len(result.name) for result in results)
    lines = [f"{'invariant'.ljust(width)}  status  seconds", "-" * (width + 17)]
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        line = f"{result.name.ljust(width)}  {status}    {result.seconds:7.2f}"
        if result.detail:
            line += f"  {result.detail}"
        lines.append(line)

    return "\n".join(lines)
