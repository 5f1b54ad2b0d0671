"""
Unit tests for the original-sample test statistics
"""

import numpy as np
from django.test import SimpleTestCase
from scipy import stats

from bootsim.estimators import AffineConstraint, ols, constrained_ols, break_fit, f_statistic
from bootsim.exceptions import (
    DegenerateNormalizationError, DegenerateSplitError, InfiniteStatisticError, ParameterError,
)
from bootsim.rngkit import derive_stream
from bootsim.statistics import (
    StatValue, slope_stat, cusum_stat, cusum_values, ks_stat, boundary_stat, sup_f, BreakWorkspace,
)


class SlopeStatTests(SimpleTestCase):
    def test_values(self):
        """
        n^(alpha/2) (beta_hat - beta0): zero at beta0, 100 * 0.01 = 1 at n = 100
        """

        x = np.arange(1.0, 101.0)[:, None]
        fit = ols(0.01 * x[:, 0], x)
        self.assertAlmostEqual(slope_stat(fit, 0.01, 2.0, 100).value, 0.0)
        self.assertAlmostEqual(slope_stat(fit, 0.0, 2.0, 100).value, 1.0)
        self.assertAlmostEqual(slope_stat(fit, 0.0, 1.0, 100).value, 0.1)

    def test_needs_single_regressor(self):
        """
        The slope statistic is defined for the univariate model only
        """

        fit = ols(np.arange(5.0), np.column_stack([np.ones(5), np.arange(5.0) ** 2]))
        with self.assertRaises(ParameterError):
            slope_stat(fit, 0.0, 2.0, 5)

    def test_finite(self):
        """
        StatValue refuses non-finite values
        """

        with self.assertRaises(InfiniteStatisticError):
            StatValue(np.inf)


class CusumStatTests(SimpleTestCase):
    def test_constant(self):
        """
        A constant series has no partial-sum excursion
        """

        self.assertAlmostEqual(cusum_stat(np.full(7, 3.0), "one").value, 0.0)

    def test_hand_evaluated(self):
        """
        e = (1, -1) with max-abs normalization gives 1
        """

        value = cusum_stat(np.array([1.0, -1.0]), "max_abs")
        self.assertAlmostEqual(value.value, 1.0)
        self.assertEqual(value.aux, 1)

    def test_location_invariance(self):
        """
        Adding a constant leaves every normalization unchanged
        """

        e = derive_stream(1).standard_normal(30)
        for nu in ("sqrt_sum_squares", "max_abs", "one"):
            self.assertAlmostEqual(cusum_stat(e + 4.2, nu).value, cusum_stat(e, nu).value)

    def test_large_offset(self):
        """
        A huge constant offset is not mistaken for a degenerate normalization
        """

        e = derive_stream(1).standard_normal(30)
        for nu in ("sqrt_sum_squares", "max_abs"):
            self.assertAlmostEqual(cusum_stat(e + 1e13, nu).value, cusum_stat(e, nu).value, delta=0.05)

    def test_scale_invariance(self):
        """
        Self-normalized statistics ignore the scale of the input
        """

        e = derive_stream(2).standard_normal(30)
        for nu in ("sqrt_sum_squares", "max_abs"):
            self.assertAlmostEqual(cusum_stat(-2.5 * e, nu).value, cusum_stat(e, nu).value)

    def test_degenerate_normalization(self):
        """
        Zero normalization is an error, as is a single observation
        """

        with self.assertRaises(DegenerateNormalizationError):
            cusum_stat(np.zeros(5), "max_abs")

        with self.assertRaises(DegenerateNormalizationError):
            cusum_stat(np.full(5, 2.0), "sqrt_sum_squares")

        with self.assertRaises(ParameterError):
            cusum_stat(np.array([1.0]), "one")

    def test_rows(self):
        """
        The batch form evaluates each row on its own
        """

        E = derive_stream(3).standard_normal((3, 12))
        values, _locations = cusum_values(E, "sqrt_sum_squares")
        for row in range(3):
            self.assertAlmostEqual(values[row], cusum_stat(E[row], "sqrt_sum_squares").value)


class KsStatTests(SimpleTestCase):
    def test_single_median(self):
        """
        One residual at the median gives 0.5
        """

        self.assertAlmostEqual(ks_stat(np.array([0.0]), stats.norm.cdf).value, 0.5)

    def test_quantile_residuals(self):
        """
        Residuals at the i/10 quantiles with n = 9 give 3 * 0.1
        """

        residuals = stats.norm.ppf(np.arange(1, 10) / 10.0)
        self.assertAlmostEqual(ks_stat(residuals, stats.norm.cdf).value, 0.3)

    def test_grid_oracle(self):
        """
        Equals the supremum over a dense grid that includes the jump points
        """

        residuals = derive_stream(4).standard_normal(30)
        ordered = np.sort(residuals)
        grid = np.concatenate([np.linspace(ordered[0] - 5, ordered[-1] + 5, 100000), ordered, ordered - 1e-12])
        empirical = np.searchsorted(ordered, grid, side="right") / 30
        oracle = np.sqrt(30) * np.max(np.abs(empirical - stats.norm.cdf(grid)))
        self.assertLess(abs(ks_stat(residuals, stats.norm.cdf).value - oracle), 1e-6)

    def test_bounds(self):
        """
        The statistic lies in [0, n^(1/2)]
        """

        far = ks_stat(np.full(16, 50.0), stats.norm.cdf).value
        self.assertAlmostEqual(far, 4.0)
        self.assertGreaterEqual(ks_stat(derive_stream(5).standard_normal(16), stats.norm.cdf).value, 0.0)


class BoundaryStatTests(SimpleTestCase):
    def test_values(self):
        """
        n^(1/2) g(theta_hat): 0 on the boundary, 10 * 0.2 = 2 inside
        """

        con = AffineConstraint(np.array([0.0, 1.0]))
        self.assertAlmostEqual(boundary_stat(np.array([0.4, 0.0]), con, 100).value, 0.0)
        self.assertAlmostEqual(boundary_stat(np.array([0.4, 0.2]), con, 100).value, 2.0)

    def test_constrained_nonnegative(self):
        """
        The statistic of a constrained fit is nonnegative when c - b = 0
        """

        con = AffineConstraint(np.array([0.0, 1.0]))
        for seed in range(5):
            stream = derive_stream(200 + seed)
            X = np.column_stack([np.ones(30), stream.standard_normal(30)])
            fit = constrained_ols(stream.standard_normal(30), X, con)
            self.assertGreaterEqual(boundary_stat(fit.coef, con, 30).value, -1e-12)


class SupFTests(SimpleTestCase):
    def setUp(self):
        stream = derive_stream(6)
        self.n = 60
        self.X = np.column_stack([np.ones(self.n), stream.standard_normal(self.n)])
        self.y = self.X @ np.array([0.5, 1.0]) + stream.standard_normal(self.n)

    def test_no_break_exact(self):
        """
        An exactly linear y gives F = 0 everywhere and the first grid fraction
        """

        value = sup_f(self.X @ np.array([0.5, 1.0]), self.X, 0.15, 0.85)
        self.assertEqual(value.value, 0.0)
        self.assertAlmostEqual(value.aux, 9 / 60)

    def test_matches_refits(self):
        """
        Every F on the grid equals an independent break regression, and sup-F is their maximum
        """

        workspace = BreakWorkspace(self.X, 0.15, 0.85)
        f = workspace.f_values(self.y)[0]
        for index, k in enumerate(workspace.splits):
            restricted, unrestricted = break_fit(self.y, self.X, k / self.n)
            self.assertAlmostEqual(f[index], f_statistic(restricted, unrestricted), places=6)

        value = sup_f(self.y, self.X, 0.15, 0.85, workspace)
        self.assertAlmostEqual(value.value, f.max())
        self.assertAlmostEqual(value.aux, workspace.fractions[np.argmax(f)])

    def test_max_property(self):
        """
        sup-F dominates F at random fractions
        """

        value = sup_f(self.y, self.X, 0.15, 0.85)
        for r in derive_stream(7).uniform(0.15, 0.85, 5):
            restricted, unrestricted = break_fit(self.y, self.X, r)
            self.assertGreaterEqual(value.value, f_statistic(restricted, unrestricted) - 1e-8)

    def test_scale_invariance(self):
        """
        Scaling y leaves sup-F unchanged
        """

        self.assertAlmostEqual(sup_f(-3.0 * self.y, self.X, 0.15, 0.85).value,
                               sup_f(self.y, self.X, 0.15, 0.85).value)

    def test_level_invariance(self):
        """
        With an intercept in X, adding a large constant to y leaves sup-F and its argmax unchanged
        """

        stream = derive_stream(9)
        n = 100
        X = np.column_stack([np.ones(n), stream.standard_normal(n)])
        slope = np.where(np.arange(n) >= 50, 1.5, 1.0)
        y = slope * X[:, 1] + stream.standard_normal(n)

        base = sup_f(y, X, 0.15, 0.85)
        self.assertGreater(base.value, 0.0)
        for level in (1e4, 1e6, 1e7):
            shifted = sup_f(y + level, X, 0.15, 0.85)
            self.assertAlmostEqual(shifted.value, base.value, delta=1e-4 * base.value)
            self.assertAlmostEqual(shifted.aux, base.aux)

    def test_locates_break(self):
        """
        A mid-sample slope break of five error standard deviations is located within 0.1
        """

        stream = derive_stream(8)
        n = 50
        X = np.column_stack([np.ones(n), stream.standard_normal(n)])
        slope = np.where(np.arange(n) >= 24, 6.0, 1.0)
        y = 0.5 + slope * X[:, 1] + stream.standard_normal(n)
        self.assertLess(abs(sup_f(y, X, 0.15, 0.85).aux - 0.5), 0.1)

    def test_infinite(self):
        """
        An exact unrestricted fit with an inexact restricted one makes F infinite
        """

        X = np.column_stack([np.ones(20), np.arange(20.0)])
        y = X @ np.array([1.0, 0.5])
        y[9:] += 2.0 * X[9:, 1]
        with self.assertRaises(InfiniteStatisticError):
            sup_f(y, X, 0.15, 0.85)

    def test_all_splits_degenerate(self):
        """
        A trimming range with no admissible split is an error
        """

        with self.assertRaises(DegenerateSplitError):
            BreakWorkspace(self.X[:10], 0.05, 0.1)
