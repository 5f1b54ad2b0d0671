"""
Original-sample test statistics.

The CUSUM, KS and sup-F statistics also come in row-wise batch form (one statistic per row of a matrix) so the
bootstrap schemes evaluate all replicates in one pass.
"""

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from bootsim.estimators import OlsFit, AffineConstraint, break_point, orthonormal_basis
from bootsim.exceptions import (
    DegenerateNormalizationError, DegenerateSplitError, InfiniteStatisticError, ParameterError, SingularDesignError,
)

# Relative size below which a residual counts as an exact zero: ||e|| against ||y|| for the restricted fit,
# ssr_u against ssr_r for the unrestricted one
EXACT_FIT_TOL = 1e-12

NU_CHOICES = ("sqrt_sum_squares", "max_abs", "one")


@dataclass(frozen=True)
class StatValue:
    """
    A statistic value plus an optional payload: the argmax fraction for sup-F, the location of the supremum for KS,
    the period of the largest partial sum for CUSUM.
    """

    value: float
    aux: Any = None

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise InfiniteStatisticError(f"Statistic value {self.value} is not finite")


def slope_stat(fit: OlsFit, beta0: float, alpha_exp: float, n: int) -> StatValue:
    """
    n^(alpha/2) (beta_hat - beta0); alpha = 2 for a random-walk regressor, 1 for a stationary one.
    """

    if fit.coef.shape[0] != 1:
        raise ParameterError("statistic", "the slope statistic needs a single regressor")

    return StatValue(float(n ** (alpha_exp / 2.0) * (fit.coef[0] - beta0)))


def cusum_values(E: np.ndarray, nu_choice: str) -> tuple[np.ndarray, np.ndarray]:
    """
    CUSUM statistic of every row of E; returns (values, 1-based period of the maximum).
    """

    if nu_choice not in NU_CHOICES:
        raise ParameterError("nu_choice", f"must be one of {', '.join(NU_CHOICES)}")

    E = np.atleast_2d(E)
    if E.shape[1] < 2:
        raise ParameterError("n", "CUSUM needs at least two observations")

    demeaned = E - E.mean(axis=1, keepdims=True)
    partial = np.abs(np.cumsum(demeaned, axis=1))
    location = np.argmax(partial, axis=1)
    peak = partial[np.arange(E.shape[0]), location]

    if nu_choice == "one":
        return peak, location + 1

    if nu_choice == "sqrt_sum_squares":
        nu = np.sqrt(np.sum(demeaned ** 2, axis=1))
    else:
        nu = np.max(np.abs(demeaned), axis=1)

    scale = np.max(np.abs(demeaned), axis=1)
    if np.any(nu <= EXACT_FIT_TOL * scale):
        raise DegenerateNormalizationError()

    return peak / nu, location + 1


def cusum_stat(e: np.ndarray, nu_choice: str) -> StatValue:
    """
    nu^-1 max_t |sum_{i <= t} (e_i - mean(e))|.
    """

    values, locations = cusum_values(e, nu_choice)
    return StatValue(float(values[0]), int(locations[0]))


def ks_values(E: np.ndarray, cdf: Callable[[np.ndarray], np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """
    KS distance of every row of E from ``cdf``, scaled by n^(1/2); returns (values, location of the supremum).
    """

    E = np.sort(np.atleast_2d(E), axis=1)
    n = E.shape[1]
    if n < 1:
        raise ParameterError("n", "KS statistic needs at least one observation")

    u = cdf(E)
    i = np.arange(1, n + 1)
    deviation = np.maximum(i / n - u, u - (i - 1) / n)
    location = np.argmax(deviation, axis=1)
    rows = np.arange(E.shape[0])
    return np.sqrt(n) * deviation[rows, location], E[rows, location]


def ks_stat(residuals: np.ndarray, cdf: Callable[[np.ndarray], np.ndarray]) -> StatValue:
    values, locations = ks_values(residuals, cdf)
    return StatValue(float(values[0]), float(locations[0]))


def boundary_stat(theta_hat: np.ndarray, con: AffineConstraint, n: int) -> StatValue:
    """
    n^(1/2) (a' theta_hat + b).
    """

    return StatValue(float(np.sqrt(n) * con.g(theta_hat)))


class BreakWorkspace:
    """
    Everything sup-F needs that depends on X alone: the split grid and orthonormal bases of the restricted design
    and of each split's two segments.

    The unrestricted regression [X, X 1{t >= k}] spans the same space as separate fits on t < k and t >= k, so
    with e = y - Q Q' y the restricted residual, ssr_u(k) = ||e||^2 - ||Q1' e1||^2 - ||Q2' e2||^2. Built once per
    regressor path and shared by every response evaluated against it (original sample and all bootstrap replicates).
    """

    def __init__(self, X: np.ndarray, r_lo: float, r_hi: float):
        if not 0 < r_lo <= r_hi < 1:
            raise ParameterError("r_lo", "trimming must satisfy 0 < r_lo <= r_hi < 1")

        self.n, self.m = X.shape
        self.r_lo, self.r_hi = r_lo, r_hi
        self.restricted = orthonormal_basis(X).T

        splits, bases = [], []
        for k in range(break_point(self.n, r_lo), break_point(self.n, r_hi) + 1):
            basis = self._split_basis(X, k)
            if basis is not None:
                splits.append(k)
                bases.append(basis)

        if not splits:
            raise DegenerateSplitError("Every split in the trimming range is degenerate")

        self.splits = np.asarray(splits)
        self.bases = np.stack(bases)

    def _split_basis(self, X: np.ndarray, k: int) -> np.ndarray | None:
        cut = k - 1
        if cut < self.m or self.n - cut < self.m:
            return None

        try:
            first, second = orthonormal_basis(X[:cut]), orthonormal_basis(X[cut:])
        except SingularDesignError:
            return None

        basis = np.zeros((2 * self.m, self.n))
        basis[:self.m, :cut] = first.T
        basis[self.m:, cut:] = second.T
        return basis

    @property
    def fractions(self) -> np.ndarray:
        return self.splits / self.n

    def ssr(self, Y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        (||y||^2, restricted ssr, unrestricted ssr per split) for every row of Y.

        Restricted residuals are formed explicitly, never as ||y||^2 minus a projection.
        """

        Y = np.atleast_2d(Y)
        total = np.sum(Y ** 2, axis=1)
        residuals = Y - (Y @ self.restricted.T) @ self.restricted
        restricted = np.sum(residuals ** 2, axis=1)
        unrestricted = restricted[:, None] - np.sum(np.einsum("kjn,bn->bkj", self.bases, residuals) ** 2, axis=2)
        return total, restricted, np.maximum(unrestricted, 0.0)

    def f_values(self, Y: np.ndarray) -> np.ndarray:
        """
        F statistic at every split for every row of Y (rows x splits).
        """

        total, restricted, unrestricted = self.ssr(Y)

        exact = restricted <= EXACT_FIT_TOL ** 2 * total
        if np.any(unrestricted[~exact] <= EXACT_FIT_TOL * restricted[~exact, None]):
            raise InfiniteStatisticError()

        denominator = np.where(exact[:, None], 1.0, unrestricted) / (self.n - 2 * self.m)
        f = (restricted[:, None] - unrestricted) / denominator
        f[exact] = 0.0
        return f

    def statistics(self, Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """
        sup-F of every row of Y; returns (values, argmax fractions, ties to the smallest r).
        """

        f = self.f_values(Y)
        best = np.argmax(f, axis=1)
        return f[np.arange(f.shape[0]), best], self.fractions[best]


def sup_f(y: np.ndarray, X: np.ndarray, r_lo: float, r_hi: float,
          workspace: BreakWorkspace | None = None) -> StatValue:
    """
    max over r in [r_lo, r_hi] of the F statistic for a coefficient shift at floor(r n); aux is the argmax fraction.
    """

    if workspace is None:
        workspace = BreakWorkspace(X, r_lo, r_hi)

    values, fractions = workspace.statistics(y)
    return StatValue(float(values[0]), float(fractions[0]))
