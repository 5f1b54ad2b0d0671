"""
Least-squares machinery: OLS, affine-constrained OLS and split-sample break regressions.

Every solve goes through a column-pivoted QR decomposition; a design whose smallest pivot falls below ``RANK_TOL``
times the largest is rejected as singular.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from bootsim.exceptions import SingularDesignError, DegenerateSplitError, ParameterError

RANK_TOL = 1e-10


@dataclass(frozen=True)
class OlsFit:
    """
    Least-squares fit of y on the columns of X.

    ``gram`` is M_n = X'X and ``sigma2_hat`` the residual variance ssr / n. ``multiplier`` is the KKT multiplier of
    an affine constraint (0 when the constraint is inactive or absent).
    """

    coef: np.ndarray
    residuals: np.ndarray
    ssr: float
    gram: np.ndarray
    sigma2_hat: float
    multiplier: float = 0.0

    @property
    def binding(self) -> bool:
        return self.multiplier > 0


@dataclass(frozen=True)
class AffineConstraint:
    """
    Feasible set {theta : a' theta + b >= c}.

    ``a`` may be shorter than theta; the remaining coordinates carry zero weight.
    """

    a: np.ndarray
    b: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        if not np.any(self.a):
            raise ParameterError("constraint.a", "gradient cannot be zero")

    def g(self, theta: np.ndarray) -> np.ndarray:
        """
        a' theta + b, evaluated row-wise when theta is a matrix of coefficient vectors.
        """

        theta = np.asarray(theta)
        return theta[..., :self.a.size] @ self.a + self.b

    def slack(self, theta: np.ndarray) -> np.ndarray:
        return self.g(theta) - self.c

    def padded(self, m: int) -> np.ndarray:
        if m < self.a.size:
            raise ParameterError("constraint.a", f"gradient has {self.a.size} entries for {m} coefficients")
        return np.concatenate([self.a, np.zeros(m - self.a.size)])

    def with_bound(self, c: float) -> "AffineConstraint":
        return AffineConstraint(self.a, self.b, c)


def orthonormal_basis(X: np.ndarray) -> np.ndarray:
    """
    Q factor of the pivoted QR of X (n x m, orthonormal columns spanning col(X)).

    Raises SingularDesignError on rank deficiency.
    """

    q, _r, _p = _decompose(X)
    return q


def _decompose(X: np.ndarray):
    n, m = X.shape
    if m == 0:
        raise SingularDesignError("Regressor matrix has no columns")
    if n < m:
        raise SingularDesignError(f"{n} observations cannot identify {m} coefficients")

    q, r, p = linalg.qr(X, mode="economic", pivoting=True)
    pivots = np.abs(np.diag(r))
    if pivots[0] == 0 or pivots[-1] <= RANK_TOL * pivots[0]:
        raise SingularDesignError()

    return q, r, p


def _solve(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """
    Least-squares coefficients for every column of Y (n x k), shape m x k.
    """

    q, r, p = _decompose(X)
    coef = np.empty((X.shape[1], Y.shape[1]))
    coef[p] = linalg.solve_triangular(r, q.T @ Y)
    return coef


def ols(y: np.ndarray, X: np.ndarray) -> OlsFit:
    coef = _solve(X, y[:, None])[:, 0]
    residuals = y - X @ coef
    ssr = float(residuals @ residuals)
    return OlsFit(coef=coef, residuals=residuals, ssr=ssr, gram=X.T @ X, sigma2_hat=ssr / y.shape[0])


def ols_batch(Y: np.ndarray, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    OLS of every row of Y (B x n) on the same X; returns (B x m coefficients, B x n residuals).
    """

    coef = _solve(X, Y.T).T
    return coef, Y - coef @ X.T


def _projection(gram: np.ndarray, a: np.ndarray) -> tuple[np.ndarray, float]:
    direction = linalg.solve(gram, a, assume_a="pos")
    return direction, float(a @ direction)


def constrained_ols(y: np.ndarray, X: np.ndarray, con: AffineConstraint) -> OlsFit:
    """
    Minimize ||y - X theta||^2 subject to a' theta + b >= c.

    An infeasible unconstrained estimate is projected onto the boundary in the M_n metric:
    theta_hat = theta + M^-1 a (a' M^-1 a)^-1 (c - b - a' theta).
    """

    fit = ols(y, X)
    a = con.padded(X.shape[1])
    gap = con.c - con.b - float(a @ fit.coef)
    if gap <= 0:
        return fit

    direction, curvature = _projection(fit.gram, a)
    multiplier = gap / curvature
    coef = fit.coef + multiplier * direction
    residuals = y - X @ coef
    ssr = float(residuals @ residuals)
    return OlsFit(coef=coef, residuals=residuals, ssr=ssr, gram=fit.gram, sigma2_hat=ssr / y.shape[0],
                  multiplier=multiplier)


def constrained_ols_batch(Y: np.ndarray, X: np.ndarray, con: AffineConstraint) -> tuple[np.ndarray, np.ndarray]:
    """
    constrained_ols for every row of Y (B x n); returns (B x m coefficients, boolean mask of binding rows).
    """

    coef, _residuals = ols_batch(Y, X)
    a = con.padded(X.shape[1])
    gap = con.c - con.b - coef @ a
    binding = gap > 0

    direction, curvature = _projection(X.T @ X, a)
    coef = coef + np.outer(np.where(binding, gap / curvature, 0.0), direction)
    return coef, binding


def break_point(n: int, r: float) -> int:
    """
    floor(r n): first period (counted from 1) of the post-break segment.
    """

    # r is usually a grid fraction k / n, guard floor() against k / n * n landing just below k
    return int(np.floor(r * n + 1e-9))


def break_regressors(X: np.ndarray, r: float) -> np.ndarray:
    """
    [X, X * 1{t >= floor(r n)}].
    """

    n, m = X.shape
    k = break_point(n, r)
    if k - 1 < m or n - k + 1 < m:
        raise DegenerateSplitError(f"Split at t = {k} leaves fewer than {m} observations in a segment")

    shifted = X.copy()
    shifted[:k - 1] = 0.0
    return np.hstack([X, shifted])


def break_fit(y: np.ndarray, X: np.ndarray, r: float) -> tuple[OlsFit, OlsFit]:
    """
    Restricted fit on X and unrestricted fit with the coefficient shift at floor(r n).
    """

    unrestricted_x = break_regressors(X, r)
    try:
        unrestricted = ols(y, unrestricted_x)
    except SingularDesignError as error:
        raise DegenerateSplitError(f"Split at r = {r:g} is rank deficient: {error.get_message()}")

    return ols(y, X), unrestricted


def f_statistic(restricted: OlsFit, unrestricted: OlsFit) -> float:
    """
    Classical F for the coefficient shift, denominator degrees of freedom n - 2m.
    """

    n = restricted.residuals.shape[0]
    m = restricted.coef.shape[0]
    return (restricted.ssr - unrestricted.ssr) / (unrestricted.ssr / (n - 2 * m))
