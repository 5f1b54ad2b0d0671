from dataclasses import dataclass, asdict, replace
from typing import ClassVar

from bootsim.exceptions import ParameterError
from bootsim.specs._fields import (
    ensure_dict, qualify, read_float, read_choice, read_floats, read_bool,
)


@dataclass(frozen=True)
class IidGaussian:
    """
    Gaussian random walk: (eps_t, eta_t) i.i.d. N(0, I2), x_t = cumulative sum of eta, y_t = beta * x_t + eps_t.
    """

    KIND: ClassVar[str] = "iid_gaussian"

    beta: float = 0.0

    @classmethod
    def from_struct(cls, data: dict, prefix: str):
        return cls(beta=read_float(data, "beta", prefix, 0.0))


@dataclass(frozen=True)
class ArchBivariate:
    """
    ARCH errors: eps_t = zeta_t (1 + a_eps eps_{t-1}^2 + a_cross eta_{t-1}^2)^(1/2),
    eta_t = xi_t (1 + a_eta eta_{t-1}^2)^(1/2).
    """

    KIND: ClassVar[str] = "arch_bivariate"

    beta: float = 0.0
    arch_eps: float = 0.3
    arch_cross: float = 0.3
    arch_eta: float = 0.6

    @staticmethod
    def validate_coefficients(arch_eps: float, arch_cross: float, arch_eta: float, prefix: str):
        """
        Both recursions need a finite unconditional variance to initialize from.
        """

        if not 0 <= arch_eta < 1:
            raise ParameterError(qualify(prefix, "arch_eta"), "must lie in [0, 1)")

        if not 0 <= arch_eps < 1:
            raise ParameterError(qualify(prefix, "arch_eps"), "must lie in [0, 1)")

        if arch_cross < 0:
            raise ParameterError(qualify(prefix, "arch_cross"), "cannot be negative")

    @property
    def eta_variance(self) -> float:
        return 1.0 / (1.0 - self.arch_eta)

    @property
    def eps_variance(self) -> float:
        return (1.0 + self.arch_cross * self.eta_variance) / (1.0 - self.arch_eps)

    @classmethod
    def from_struct(cls, data: dict, prefix: str):
        spec = cls(
            beta=read_float(data, "beta", prefix, 0.0),
            arch_eps=read_float(data, "arch_eps", prefix, 0.3),
            arch_cross=read_float(data, "arch_cross", prefix, 0.3),
            arch_eta=read_float(data, "arch_eta", prefix, 0.6),
        )
        cls.validate_coefficients(spec.arch_eps, spec.arch_cross, spec.arch_eta, prefix)
        return spec


@dataclass(frozen=True)
class EndogenousSign:
    """
    Endogenous sign: eta_t = xi_t (1 + delta 1{eps_t <= 0}), (eps_t, xi_t) i.i.d. N(0, I2).
    """

    KIND: ClassVar[str] = "endogenous_sign"

    beta: float = 0.0
    delta: float = 9.0

    @classmethod
    def from_struct(cls, data: dict, prefix: str):
        spec = cls(beta=read_float(data, "beta", prefix, 0.0), delta=read_float(data, "delta", prefix, 9.0))
        if spec.delta < 0:
            raise ParameterError(qualify(prefix, "delta"), "cannot be negative")
        return spec


@dataclass(frozen=True)
class CointegrationRW:
    """
    y_t = beta * x_t + omega^(1/2) eps_t with a random walk (or i.i.d. stationary) regressor.
    """

    KIND: ClassVar[str] = "cointegration_rw"
    REGRESSORS: ClassVar[tuple[str, ...]] = ("random_walk", "stationary")

    beta: float = 0.0
    omega: float = 1.0
    regressor: str = "random_walk"

    @classmethod
    def from_struct(cls, data: dict, prefix: str):
        spec = cls(
            beta=read_float(data, "beta", prefix, 0.0),
            omega=read_float(data, "omega", prefix, 1.0),
            regressor=read_choice(data, "regressor", cls.REGRESSORS, prefix, "random_walk"),
        )
        if spec.omega <= 0:
            raise ParameterError(qualify(prefix, "omega"), "error variance must be positive")
        return spec


@dataclass(frozen=True)
class InfiniteVarianceIid:
    """
    i.i.d. symmetric alpha-stable errors, no regressor.
    """

    KIND: ClassVar[str] = "infinite_variance_iid"

    alpha: float = 1.5

    @classmethod
    def from_struct(cls, data: dict, prefix: str):
        spec = cls(alpha=read_float(data, "alpha", prefix))
        if not 0 < spec.alpha < 2:
            raise ParameterError(qualify(prefix, "alpha"), "tail index must lie in (0, 2)")
        return spec


@dataclass(frozen=True)
class PredictiveRegression:
    """
    y_t = theta_1 + theta_2 x_{n,t-1} + eps_t with x_{n,t} = (1 - c/n) x_{n,t-1} + n^(-1/2) u_t.

    ``rho`` correlates eps_t with the regressor innovation u_t (zero by default).
    """

    KIND: ClassVar[str] = "predictive_regression"
    REGRESSORS: ClassVar[tuple[str, ...]] = ("random_walk", "local_to_unity")

    theta0: tuple[float, float] = (0.0, 0.0)
    regressor_kind: str = "random_walk"
    c: float = 0.0
    rho: float = 0.0

    @classmethod
    def from_struct(cls, data: dict, prefix: str):
        spec = cls(
            theta0=read_floats(data, "theta0", prefix, (0.0, 0.0), length=2),
            regressor_kind=read_choice(data, "regressor_kind", cls.REGRESSORS, prefix, "random_walk"),
            c=read_float(data, "c", prefix, 0.0),
            rho=read_float(data, "rho", prefix, 0.0),
        )
        if spec.c < 0:
            raise ParameterError(qualify(prefix, "c"), "mean reversion cannot be negative")
        if not -1 < spec.rho < 1:
            raise ParameterError(qualify(prefix, "rho"), "correlation must lie in (-1, 1)")
        return spec


@dataclass(frozen=True)
class BreakRegression:
    """
    y_t = beta_t' x_t + eps_t with beta_t = beta1 + theta 1{t >= floor(r_star n)}.

    x_t is ``(1, z_t)`` when ``intercept`` is set, else ``(z_t,)``; z_t is i.i.d. N(0, 1) (``iid``), i.i.d. with its
    variance doubled from ``shift_fraction`` on (``variance_shift``), or a scaled random walk (``random_walk``).
    """

    KIND: ClassVar[str] = "break_regression"
    REGRESSORS: ClassVar[tuple[str, ...]] = ("iid", "variance_shift", "random_walk")
    ERRORS: ClassVar[tuple[str, ...]] = ("homoskedastic", "garch", "endogenous_sign")

    beta1: tuple[float, ...] = (0.0, 1.0)
    theta: tuple[float, ...] = (0.0, 0.0)
    r_star: float | None = None
    regressor_kind: str = "iid"
    error_kind: str = "homoskedastic"
    intercept: bool = True
    shift_fraction: float = 0.5
    delta: float = 9.0

    @property
    def m(self) -> int:
        return 2 if self.intercept else 1

    @classmethod
    def from_struct(cls, data: dict, prefix: str):
        intercept = read_bool(data, "intercept", prefix, True)
        m = 2 if intercept else 1
        spec = cls(
            beta1=read_floats(data, "beta1", prefix, (0.0, 1.0)[-m:], length=m),
            theta=read_floats(data, "theta", prefix, (0.0,) * m, length=m),
            r_star=read_float(data, "r_star", prefix, None),
            regressor_kind=read_choice(data, "regressor_kind", cls.REGRESSORS, prefix, "iid"),
            error_kind=read_choice(data, "error_kind", cls.ERRORS, prefix, "homoskedastic"),
            intercept=intercept,
            shift_fraction=read_float(data, "shift_fraction", prefix, 0.5),
            delta=read_float(data, "delta", prefix, 9.0),
        )

        if spec.r_star is not None and not 0 < spec.r_star < 1:
            raise ParameterError(qualify(prefix, "r_star"), "break fraction must lie in (0, 1)")

        if spec.r_star is None and any(t != 0 for t in spec.theta):
            raise ParameterError(qualify(prefix, "r_star"), "a nonzero break needs a break fraction")

        if not 0 < spec.shift_fraction < 1:
            raise ParameterError(qualify(prefix, "shift_fraction"), "must lie in (0, 1)")

        if spec.error_kind == "endogenous_sign" and spec.regressor_kind != "random_walk":
            raise ParameterError(qualify(prefix, "error_kind"), "endogenous_sign errors drive a random_walk regressor")

        return spec


DGP_VARIANTS = {
    variant.KIND: variant
    for variant in (IidGaussian, ArchBivariate, EndogenousSign, CointegrationRW, InfiniteVarianceIid,
                    PredictiveRegression, BreakRegression)
}

# DGPs of the double MC design, which know how to redraw y given the regressor path
CONDITIONAL_KINDS = (IidGaussian.KIND, ArchBivariate.KIND, EndogenousSign.KIND)

# Univariate slope models y_t = beta x_t + eps_t
SLOPE_KINDS = (IidGaussian.KIND, ArchBivariate.KIND, EndogenousSign.KIND, CointegrationRW.KIND)


@dataclass(frozen=True)
class DgpSpec:
    """
    Data generating process: one variant record plus the sample size.
    """

    variant: IidGaussian | ArchBivariate | EndogenousSign | CointegrationRW | InfiniteVarianceIid \
        | PredictiveRegression | BreakRegression
    n: int

    @property
    def kind(self) -> str:
        return self.variant.KIND

    @staticmethod
    def validate_n(n: int, prefix: str):
        if n < 2:
            raise ParameterError(qualify(prefix, "n"), "sample size must be at least 2")

    @classmethod
    def from_struct(cls, data: dict, n: int, prefix: str = "dgp"):
        data = ensure_dict(data, prefix)
        kind = read_choice(data, "kind", tuple(DGP_VARIANTS), prefix)
        cls.validate_n(n, prefix)
        return cls(variant=DGP_VARIANTS[kind].from_struct(data, prefix), n=n)

    def to_struct(self) -> dict:
        struct = {"kind": self.kind, **asdict(self.variant)}
        return {key: list(value) if isinstance(value, tuple) else value for key, value in struct.items()}

    def with_beta(self, beta: float) -> "DgpSpec":
        """
        Same DGP with the slope replaced, used for local alternatives beta = b / n.
        """

        if self.kind not in SLOPE_KINDS:
            raise ParameterError("experiment.local_alt_b", f"local alternatives need a slope DGP, not {self.kind}")

        return replace(self, variant=replace(self.variant, beta=beta))


__all__ = [
    "IidGaussian", "ArchBivariate", "EndogenousSign", "CointegrationRW", "InfiniteVarianceIid",
    "PredictiveRegression", "BreakRegression", "DgpSpec", "DGP_VARIANTS", "CONDITIONAL_KINDS", "SLOPE_KINDS",
]
