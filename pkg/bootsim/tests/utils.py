import json
from pathlib import Path

from bootsim.specs import DgpSpec, SchemeSpec, Experiment, IidGaussian, FixedDesignGaussian


def slope_experiment(n: int = 20, dgp_variant=None, analytic: bool = True, b: int = 999,
                     known_omega: float | None = None) -> Experiment:
    """
    Slope test with the fixed-design Gaussian bootstrap, i.i.d. Gaussian DGP unless another variant is given
    """

    return Experiment(
        dgp=DgpSpec(dgp_variant if dgp_variant is not None else IidGaussian(), n),
        scheme=SchemeSpec(FixedDesignGaussian(analytic=analytic, b=b, known_omega=known_omega)),
        statistic="slope",
        tail="left",
    )


def minimal_config(**overrides) -> dict:
    """
    i.i.d. Gaussian DGP, analytic fixed-design bootstrap, n = 10, 100 replications, seed 1
    """

    config = {
        "schema_version": 1,
        "seed": 1,
        "mode": {"kind": "unconditional", "reps": 100},
        "experiment": {
            "n": 10,
            "statistic": "slope",
            "dgp": {"kind": "iid_gaussian", "beta": 0.0},
            "scheme": {"kind": "fixed_design_gaussian", "analytic": True},
        },
    }
    config.update(overrides)
    return config


def write_config(directory: str | Path, config: dict, name: str = "config.json") -> str:
    """
    Dump a config dict into directory and return its path
    """

    path = Path(directory) / name
    path.write_text(json.dumps(config), encoding="utf-8")
    return str(path)
