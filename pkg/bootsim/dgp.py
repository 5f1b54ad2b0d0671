"""
Samplers for every data generating process, plus conditional-on-regressor redraws for the double MC design.

Draw order inside a stream is fixed per DGP (documented on each sampler) so that a ``(seed, path)`` pair always
reproduces the same sample.
"""

from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import lfilter

from bootsim.estimators import break_point
from bootsim.exceptions import ParameterError, UnsupportedDgpError
from bootsim.rngkit import Stream, sample_std_normal, sample_symmetric_stable
from bootsim.specs import (
    DgpSpec, IidGaussian, ArchBivariate, EndogenousSign, CointegrationRW, InfiniteVarianceIid, PredictiveRegression,
    BreakRegression,
)

# GARCH(1,1) error recursion for break regressions, unit unconditional variance
GARCH_OMEGA = 0.1
GARCH_ALPHA = 0.1
GARCH_BETA = 0.8


@dataclass(frozen=True)
class SampleDraw:
    """
    Observed series plus the latent shocks that generated them.

    ``x`` is always an n x m matrix (m = 0 when the DGP has no regressor); ``eta`` is the regressor innovation where
    one is defined.
    """

    y: np.ndarray
    x: np.ndarray
    eps: np.ndarray
    eta: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.y.shape[0]


def _arch_eta(xi: np.ndarray, spec: ArchBivariate) -> np.ndarray:
    eta = np.empty_like(xi)
    previous = spec.eta_variance
    for t, shock in enumerate(xi):
        eta[t] = shock * np.sqrt(1.0 + spec.arch_eta * previous)
        previous = eta[t] ** 2
    return eta


def _arch_eps(zeta: np.ndarray, eta: np.ndarray, spec: ArchBivariate) -> np.ndarray:
    eps = np.empty_like(zeta)
    previous_eps, previous_eta = spec.eps_variance, spec.eta_variance
    for t, shock in enumerate(zeta):
        eps[t] = shock * np.sqrt(1.0 + spec.arch_eps * previous_eps + spec.arch_cross * previous_eta)
        previous_eps, previous_eta = eps[t] ** 2, eta[t] ** 2
    return eps


def _garch_errors(e: np.ndarray) -> np.ndarray:
    eps = np.empty_like(e)
    h = GARCH_OMEGA / (1.0 - GARCH_ALPHA - GARCH_BETA)
    previous = h
    for t, shock in enumerate(e):
        h = GARCH_OMEGA + GARCH_ALPHA * previous + GARCH_BETA * h
        eps[t] = shock * np.sqrt(h)
        previous = eps[t] ** 2
    return eps


def _slope_draw(beta: float, x: np.ndarray, eps: np.ndarray, eta: np.ndarray) -> SampleDraw:
    return SampleDraw(y=beta * x + eps, x=x[:, None], eps=eps, eta=eta)


def bayes_sign_probability(eta: np.ndarray, delta: float) -> np.ndarray:
    """
    P(eps_t <= 0 | eta_t) for the endogenous-sign DGP.
    """

    exponent = -(np.square(eta) / 2.0) * delta * (2.0 + delta) / (1.0 + delta) ** 2
    return 1.0 / (1.0 + (1.0 + delta) * np.exp(exponent))


def _conditional_eps_iii(eta: np.ndarray, delta: float, stream: Stream) -> np.ndarray:
    """
    eps_t | eta_t ~ |xi_t| s_t with s_t = -1 w.p. p_t. Draw order: xi (n normals), then n uniforms.
    """

    n = eta.shape[0]
    xi = sample_std_normal(stream, n)
    signs = np.where(stream.random(n) < bayes_sign_probability(eta, delta), -1.0, 1.0)
    return np.abs(xi) * signs


def _simulate_iid_gaussian(spec: IidGaussian, n: int, stream: Stream) -> SampleDraw:
    # Draw order: eps, eta
    eps = sample_std_normal(stream, n)
    eta = sample_std_normal(stream, n)
    return _slope_draw(spec.beta, np.cumsum(eta), eps, eta)


def _simulate_arch(spec: ArchBivariate, n: int, stream: Stream) -> SampleDraw:
    # Draw order: zeta, xi
    zeta = sample_std_normal(stream, n)
    eta = _arch_eta(sample_std_normal(stream, n), spec)
    return _slope_draw(spec.beta, np.cumsum(eta), _arch_eps(zeta, eta, spec), eta)


def _simulate_endogenous_sign(spec: EndogenousSign, n: int, stream: Stream) -> SampleDraw:
    # Draw order: eps, xi
    eps = sample_std_normal(stream, n)
    xi = sample_std_normal(stream, n)
    eta = xi * (1.0 + spec.delta * (eps <= 0))
    return _slope_draw(spec.beta, np.cumsum(eta), eps, eta)


def _simulate_cointegration(spec: CointegrationRW, n: int, stream: Stream) -> SampleDraw:
    # Draw order: eps, eta
    eps = np.sqrt(spec.omega) * sample_std_normal(stream, n)
    eta = sample_std_normal(stream, n)
    x = np.cumsum(eta) if spec.regressor == "random_walk" else eta
    return _slope_draw(spec.beta, x, eps, eta)


def _simulate_infinite_variance(spec: InfiniteVarianceIid, n: int, stream: Stream) -> SampleDraw:
    eps = sample_symmetric_stable(stream, spec.alpha, n)
    return SampleDraw(y=eps, x=np.empty((n, 0)), eps=eps)


def _simulate_predictive(spec: PredictiveRegression, n: int, stream: Stream) -> SampleDraw:
    """
    Columns of x are (1, x_{n,t-1}, dx_{n,t}); bootstrap fits use the first two only.

    Draw order: u (regressor innovations), e (idiosyncratic error part).
    """

    u = sample_std_normal(stream, n)
    e = sample_std_normal(stream, n)
    persistence = 1.0 - spec.c / n if spec.regressor_kind == "local_to_unity" else 1.0

    # x_{n,0} = 0, x_{n,t} = persistence * x_{n,t-1} + n^(-1/2) u_t
    path = np.concatenate([[0.0], lfilter([1.0], [1.0, -persistence], u / np.sqrt(n))])
    eps = spec.rho * u + np.sqrt(1.0 - spec.rho ** 2) * e

    theta1, theta2 = spec.theta0
    lagged = path[:-1]
    x = np.column_stack([np.ones(n), lagged, np.diff(path)])
    return SampleDraw(y=theta1 + theta2 * lagged + eps, x=x, eps=eps, eta=u)


def _simulate_break(spec: BreakRegression, n: int, stream: Stream) -> SampleDraw:
    """
    Draw order: e (error shocks), then the regressor normals.
    """

    e = sample_std_normal(stream, n)
    eps = _garch_errors(e) if spec.error_kind == "garch" else e

    eta = None
    if spec.regressor_kind == "iid":
        z = sample_std_normal(stream, n)
    elif spec.regressor_kind == "variance_shift":
        scale = np.where(np.arange(n) >= max(break_point(n, spec.shift_fraction) - 1, 0), np.sqrt(2.0), 1.0)
        z = scale * sample_std_normal(stream, n)
    else:
        eta = sample_std_normal(stream, n)
        if spec.error_kind == "endogenous_sign":
            eta = eta * (1.0 + spec.delta * (eps <= 0))
        z = np.cumsum(eta) / np.sqrt(n)

    x = np.column_stack([np.ones(n), z]) if spec.intercept else z[:, None]

    coefficients = np.tile(np.asarray(spec.beta1), (n, 1))
    if spec.r_star is not None:
        coefficients[max(break_point(n, spec.r_star) - 1, 0):] += np.asarray(spec.theta)

    return SampleDraw(y=np.sum(x * coefficients, axis=1) + eps, x=x, eps=eps, eta=eta)


_SAMPLERS = {
    IidGaussian: _simulate_iid_gaussian,
    ArchBivariate: _simulate_arch,
    EndogenousSign: _simulate_endogenous_sign,
    CointegrationRW: _simulate_cointegration,
    InfiniteVarianceIid: _simulate_infinite_variance,
    PredictiveRegression: _simulate_predictive,
    BreakRegression: _simulate_break,
}


def simulate(spec: DgpSpec, stream: Stream) -> SampleDraw:
    return _SAMPLERS[type(spec.variant)](spec.variant, spec.n, stream)


def simulate_conditional_iii(draw: SampleDraw, delta: float, beta: float, stream: Stream) -> np.ndarray:
    """
    Redraw y for the endogenous-sign DGP given the regressor path ``draw.x`` and its innovations ``draw.eta``.
    """

    if delta < 0:
        raise ParameterError("delta", "cannot be negative")

    if draw.eta is None or not np.allclose(np.cumsum(draw.eta), draw.x[:, 0]):
        raise ParameterError("eta", "innovation path does not generate the regressor")

    return beta * draw.x[:, 0] + _conditional_eps_iii(draw.eta, delta, stream)


def simulate_conditional(spec: DgpSpec, draw: SampleDraw, stream: Stream) -> SampleDraw:
    """
    Redraw the response from its distribution conditional on the regressor path of ``draw``.

    Supported for the i.i.d. Gaussian DGP (fresh independent errors), the ARCH DGP (the error recursion driven
    by the fixed eta path) and the endogenous-sign DGP (the Bayes-rule sign sampler).
    """

    variant = spec.variant
    x = draw.x[:, 0] if draw.x.shape[1] else None

    if isinstance(variant, IidGaussian):
        eps = sample_std_normal(stream, spec.n)
    elif isinstance(variant, ArchBivariate):
        eps = _arch_eps(sample_std_normal(stream, spec.n), draw.eta, variant)
    elif isinstance(variant, EndogenousSign):
        y = simulate_conditional_iii(draw, variant.delta, variant.beta, stream)
        return replace(draw, y=y, eps=y - variant.beta * x)
    else:
        raise UnsupportedDgpError(spec.kind)

    return replace(draw, y=variant.beta * x + eps, eps=eps)
