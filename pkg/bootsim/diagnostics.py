"""
Uniformity and validity diagnostics for bootstrap p-values, plus the local power oracles of the slope test.
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np
from django.conf import settings
from scipy import stats
from scipy.optimize import brentq
from scipy.special import ndtr, ndtri

from bootsim.exceptions import ParameterError
from bootsim.rngkit import Stream

if TYPE_CHECKING:
    from bootsim.mc import ConditionalEcdfPanel

# Brownian paths simulated per batch by simulate_mixing_variable
MIXING_CHUNK = 1000


def ecdf(values: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """
    Fraction of ``values`` at or below each grid point.
    """

    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ParameterError("values", "empirical cdf of an empty sample")

    if np.any(values < 0) or np.any(values > 1):
        raise ParameterError("values", "p-values must lie in [0, 1]")

    return np.searchsorted(np.sort(values), np.asarray(grid, dtype=float), side="right") / values.size


def ks_to_uniform(pvalues: np.ndarray) -> float:
    """
    sup_x |ecdf(x) - x|, evaluated exactly at the order statistics.
    """

    p = np.sort(np.asarray(pvalues, dtype=float))
    k = p.size
    if k == 0:
        raise ParameterError("pvalues", "uniformity of an empty sample")

    i = np.arange(1, k + 1)
    return float(max(np.max(i / k - p), np.max(p - (i - 1) / k)))


def rejection_rate(pvalues: np.ndarray, q: float) -> float:
    """
    Fraction of p-values not exceeding the nominal level q.
    """

    if not 0 < q < 1:
        raise ParameterError("level", "nominal level must lie in (0, 1)")

    return float(np.mean(np.asarray(pvalues) <= q))


def ks_two_sample(a: np.ndarray, b: np.ndarray):
    """
    Two-sample KS test (scipy result with ``statistic`` and ``pvalue``).
    """

    return stats.ks_2samp(a, b)


@dataclass(frozen=True)
class UniformityReport:
    ks_to_uniform: float
    rejection_rates: dict[float, float]
    n_pvalues: int

    @classmethod
    def from_pvalues(cls, pvalues: np.ndarray, levels: Sequence[float] | None = None):
        if levels is None:
            levels = settings.RANDBOOT_NOMINAL_LEVELS

        return cls(
            ks_to_uniform=ks_to_uniform(pvalues),
            rejection_rates={q: rejection_rate(pvalues, q) for q in levels},
            n_pvalues=len(pvalues),
        )

    def to_struct(self) -> dict:
        return {
            "ks_to_uniform": self.ks_to_uniform,
            "rejection_rates": {f"{q:g}": rate for q, rate in self.rejection_rates.items()},
            "n_pvalues": self.n_pvalues,
        }


@dataclass(frozen=True)
class FanChartSummary:
    """
    Average of the conditional p-value cdfs with pointwise quantile bands.

    Bands are widened where needed so that lower <= average <= upper holds at every grid point; ``widened_points``
    counts the grid points where a raw quantile was moved onto the average.
    """

    grid: np.ndarray
    average_cdf: np.ndarray
    lower_band: np.ndarray
    upper_band: np.ndarray
    band: tuple[float, float]
    widened_points: int = 0

    @property
    def max_dispersion(self) -> float:
        return float(np.max(self.upper_band - self.lower_band))

    @property
    def max_average_deviation(self) -> float:
        """
        sup over the grid of |average cdf - identity|.
        """

        return float(np.max(np.abs(self.average_cdf - self.grid)))

    def to_struct(self) -> dict:
        return {
            "band": list(self.band),
            "band_kind": "pointwise",
            "contains_average": True,
            "widened_points": self.widened_points,
            "max_dispersion": self.max_dispersion,
            "max_average_deviation": self.max_average_deviation,
        }


def fanchart(panel: "ConditionalEcdfPanel", band: tuple[float, float] | None = None) -> FanChartSummary:
    if band is None:
        band = tuple(settings.RANDBOOT_BAND)

    if panel.m == 0:
        raise ParameterError("outer", "fan chart of an empty panel")

    lo, hi = band
    average = panel.cdf_values.mean(axis=0)
    lower, upper = np.quantile(panel.cdf_values, [lo, hi], axis=0)

    return FanChartSummary(
        grid=panel.grid,
        average_cdf=average,
        lower_band=np.minimum(lower, average),
        upper_band=np.maximum(upper, average),
        band=(lo, hi),
        widened_points=int(np.count_nonzero((lower > average) | (upper < average))),
    )


def row_deviations(panel: "ConditionalEcdfPanel") -> np.ndarray:
    """
    sup over the grid of |row cdf - identity|, one value per outer draw.
    """

    return np.max(np.abs(panel.cdf_values - panel.grid), axis=1)


def simulate_mixing_variable(paths: int, steps: int, stream: Stream) -> np.ndarray:
    """
    Draws of M = int_0^1 B(t)^2 dt, discretized as steps^-2 sum_t (sum_{s <= t} z_s)^2.
    """

    if paths < 1 or steps < 1:
        raise ParameterError("oracle_paths", "paths and steps must be positive")

    draws = []
    for start in range(0, paths, MIXING_CHUNK):
        size = min(MIXING_CHUNK, paths - start)
        walks = np.cumsum(stream.standard_normal((size, steps)), axis=1)
        draws.append(np.sum(walks ** 2, axis=1) / steps ** 2)

    return np.concatenate(draws)


def conditional_local_power(b: float, q: float, mixing: np.ndarray) -> np.ndarray:
    """
    Phi(Phi^-1(q) - M^(1/2) b) for each draw of M: the power given the regressor path.
    """

    return ndtr(ndtri(q) - np.sqrt(mixing) * b)


def local_power_oracle(b: float, q: float, paths: int, steps: int, stream: Stream) -> float:
    """
    Asymptotic local power E Phi(Phi^-1(q) - M^(1/2) b) of the left-tailed bootstrap slope test.
    """

    return float(np.mean(conditional_local_power(b, q, simulate_mixing_variable(paths, steps, stream))))


def asymptotic_power_oracle(b: float, q: float, mixing: np.ndarray) -> float:
    """
    Local power of the left-tailed test that uses the unconditional quantile c of the M^(-1/2) xi limit:
    E Phi(c M^(1/2)) = q, power E Phi(M^(1/2) (c - b)).
    """

    root = np.sqrt(mixing)
    critical = brentq(lambda c: np.mean(ndtr(c * root)) - q, -1e3, 1e3)
    return float(np.mean(ndtr(root * (critical - b))))
