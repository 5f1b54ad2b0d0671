"""
The bootstrap schemes and bootstrap p-values.

Every scheme is a pure function of its inputs and the replicate streams it is handed (stream ``b`` drives replicate
``b``); replicates are then evaluated together as a B x n matrix.
"""

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats
from scipy.special import ndtr

from bootsim.dgp import SampleDraw
from bootsim.estimators import OlsFit, AffineConstraint, ols_batch, constrained_ols_batch, break_fit
from bootsim.exceptions import DegenerateDesignError, ParameterError
from bootsim.rngkit import Stream, stacked_normals, sample_uniform_permutation
from bootsim.specs import FixedDesignGaussian, PermutationCusum, ParametricKs, BoundaryWild, SupFWild
from bootsim.statistics import cusum_values, ks_values, BreakWorkspace


@dataclass(frozen=True)
class EmpiricalDistribution:
    """
    Bootstrap distribution given by its draws, sorted ascending.

    ``binding_share`` is the fraction of replicates whose constrained fit hit the boundary (boundary schemes only).
    """

    draws: np.ndarray
    binding_share: float | None = None

    def __post_init__(self):
        draws = np.sort(np.asarray(self.draws, dtype=float))
        if draws.size == 0:
            raise ParameterError("b", "a bootstrap distribution needs at least one draw")
        object.__setattr__(self, "draws", draws)

    @property
    def b(self) -> int:
        return self.draws.size


@dataclass(frozen=True)
class AnalyticNormalCdf:
    """
    The cdf u -> Phi(u / scale).
    """

    scale: float

    def __post_init__(self):
        if not self.scale > 0:
            raise DegenerateDesignError(f"Bootstrap scale {self.scale} is not positive")


BootstrapDistribution = EmpiricalDistribution | AnalyticNormalCdf


def pvalue(dist: BootstrapDistribution, tau: float, tail: str) -> float:
    """
    Left: P*(tau* <= tau); right: P*(tau* >= tau). Empirical distributions use the plain proportion.
    """

    if tail not in ("left", "right"):
        raise ParameterError("tail", "must be left or right")

    if isinstance(dist, AnalyticNormalCdf):
        left = float(ndtr(tau / dist.scale))
        return left if tail == "left" else 1.0 - left

    if tail == "left":
        return float(np.searchsorted(dist.draws, tau, side="right") / dist.b)

    return float((dist.b - np.searchsorted(dist.draws, tau, side="left")) / dist.b)


def fixed_design_gaussian(sample: SampleDraw, fit: OlsFit, spec: FixedDesignGaussian, streams: Sequence[Stream],
                          alpha_exp: float = 2.0) -> BootstrapDistribution:
    """
    Distribution of tau* = n^(alpha/2) (beta* - beta_hat) for y*_t = beta_hat x_t + omega^(1/2) eps*_t.

    The analytic form is N(0, n^alpha omega / M_n); omega is the residual variance unless the spec carries the known
    error variance.
    """

    n = sample.n
    gram = float(fit.gram[0, 0])
    if gram <= 0:
        raise DegenerateDesignError()

    omega = spec.known_omega if spec.known_omega is not None else fit.sigma2_hat
    rate = n ** (alpha_exp / 2.0)

    if spec.analytic:
        return AnalyticNormalCdf(rate * np.sqrt(omega / gram))

    fitted = sample.x @ fit.coef
    responses = fitted + np.sqrt(omega) * stacked_normals(streams, n)
    coef, _residuals = ols_batch(responses, sample.x)
    return EmpiricalDistribution(rate * (coef[:, 0] - fit.coef[0]))


def permutation_orders(n: int, spec: PermutationCusum, streams: Sequence[Stream]) -> np.ndarray:
    """
    All n! orderings of ``range(n)`` under full enumeration, else one uniform permutation per stream.
    """

    if spec.enumerates(n):
        return np.array(list(itertools.permutations(range(n))))

    return np.vstack([sample_uniform_permutation(stream, n) for stream in streams])


def permutation_cusum(e: np.ndarray, spec: PermutationCusum, streams: Sequence[Stream]) -> BootstrapDistribution:
    """
    CUSUM statistics of the permuted input.
    """

    if e.shape[0] < 2:
        raise ParameterError("n", "permutation CUSUM needs at least two observations")

    values, _locations = cusum_values(e[permutation_orders(e.shape[0], spec, streams)], spec.nu_choice)
    return EmpiricalDistribution(values)


def null_law(spec: ParametricKs):
    """
    The frozen scipy distribution of the null error law, standardized to mean 0 and variance 1.
    """

    if spec.null == "laplace":
        return stats.laplace(scale=1.0 / np.sqrt(2.0))

    if spec.null == "student_t":
        return stats.t(spec.df, scale=np.sqrt((spec.df - 2.0) / spec.df))

    return stats.norm()


def parametric_ks(sample: SampleDraw, law, spec: ParametricKs, streams: Sequence[Stream]) -> BootstrapDistribution:
    """
    Draw eps* i.i.d. from ``law``, regress on the sample's regressors (if any) and take the residual KS statistic.
    """

    errors = np.vstack([law.rvs(size=sample.n, random_state=stream) for stream in streams])
    residuals = ols_batch(errors, sample.x)[1] if sample.x.shape[1] else errors
    values, _locations = ks_values(residuals, law.cdf)
    return EmpiricalDistribution(values)


def bootstrap_bound(con: AffineConstraint, theta_hat: np.ndarray, spec: BoundaryWild, n: int) -> float:
    """
    Bound c* of the bootstrap parameter space {theta : a' theta + b >= c*}.

    With slack s = g(theta_hat) - c: standard keeps c, restricted uses g(theta_hat), shrinking
    g(theta_hat) - |s|^(1+kappa) and the rate form g(theta_hat) - n^(-kappa) |s|.
    """

    g = float(con.g(theta_hat))
    slack = abs(g - con.c)

    if spec.gstar == "restricted":
        return g
    if spec.gstar == "shrinking":
        return g - slack ** (1.0 + spec.kappa)
    if spec.gstar == "shrinking_rate":
        return g - n ** (-spec.kappa) * slack

    return con.c


def boundary_wild(sample: SampleDraw, fit: OlsFit, con: AffineConstraint, spec: BoundaryWild,
                  streams: Sequence[Stream]) -> BootstrapDistribution:
    """
    Fixed-regressor wild bootstrap of n^(1/2) g(theta_hat) for a constrained predictive regression.

    ``fit`` is the constrained fit on (1, x_{t-1}, dx_t); bootstrap samples y*_t = theta_1 + theta_2 x_{t-1} +
    e_t w*_t with w* ~ N(0, 1) are refitted on (1, x_{t-1}) alone under the bound g*(theta_hat).
    """

    n = sample.n
    design = sample.x[:, :2]
    theta_hat = fit.coef[:2]

    responses = design @ theta_hat + fit.residuals * stacked_normals(streams, n)
    bootstrap_con = con.with_bound(bootstrap_bound(con, theta_hat, spec, n))
    coef, binding = constrained_ols_batch(responses, design, bootstrap_con)

    draws = np.sqrt(n) * (con.g(coef) - con.g(theta_hat))
    return EmpiricalDistribution(draws, binding_share=float(np.mean(binding)))


def supf_wild(sample: SampleDraw, r_tilde: float, spec: SupFWild, streams: Sequence[Stream],
              workspace: BreakWorkspace | None = None) -> BootstrapDistribution:
    """
    sup-F statistics of y* = e~ w*, with e~ the residuals of the break regression at the original argmax r_tilde.
    """

    if workspace is None:
        workspace = BreakWorkspace(sample.x, spec.r_lo, spec.r_hi)

    _restricted, unrestricted = break_fit(sample.y, sample.x, r_tilde)
    values, _fractions = workspace.statistics(unrestricted.residuals * stacked_normals(streams, sample.n))
    return EmpiricalDistribution(values)
