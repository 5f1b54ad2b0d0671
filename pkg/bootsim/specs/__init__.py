from ._dgp_spec import (
    DgpSpec, IidGaussian, ArchBivariate, EndogenousSign, CointegrationRW, InfiniteVarianceIid, PredictiveRegression,
    BreakRegression, DGP_VARIANTS, CONDITIONAL_KINDS, SLOPE_KINDS,
)
from ._scheme_spec import (
    SchemeSpec, FixedDesignGaussian, PermutationCusum, ParametricKs, BoundaryWild, SupFWild, SCHEME_VARIANTS,
)
from ._experiment import Experiment, STATISTICS, TAILS
from ._run_config import RunConfig, UnconditionalMode, DoubleMode, PowerGrid
