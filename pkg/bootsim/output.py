"""
Result writers: long-format CSV tables (pandas), JSON reports and the metadata sidecar that pins down a run.
"""

import hashlib
import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

import bootsim
from bootsim.specs import RunConfig

logger = logging.getLogger(__name__)


def config_hash(config: RunConfig) -> str:
    """
    sha256 of the normalized config, independent of key order and of the output directory.
    """

    struct = config.to_struct()
    struct.pop("output_dir")
    struct.pop("threads")
    canonical = json.dumps(struct, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def metadata(config: RunConfig) -> dict:
    return {
        "seed": config.master_seed,
        "version": bootsim.__version__,
        "schema_version": config.schema_version,
        "config_hash": config_hash(config),
        "config": config.to_struct(),
    }


def _prepare(output_dir: str | Path) -> Path:
    directory = Path(output_dir)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def write_csv(frame: pd.DataFrame, output_dir: str | Path, name: str, config: RunConfig,
              notes: dict | None = None) -> Path:
    """
    Write ``frame`` as ``name`` plus a ``name.meta.json`` sidecar; ``notes`` are merged into the sidecar.
    """

    path = _prepare(output_dir) / name
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n", float_format="%.17g")
    write_json({**metadata(config), **(notes or {})}, output_dir, f"{name}.meta.json")
    logger.info("Wrote %s (%d rows)", path, len(frame))
    return path


def write_json(data: dict, output_dir: str | Path, name: str) -> Path:
    path = _prepare(output_dir) / name
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def pvalue_frame(pvalues: np.ndarray) -> pd.DataFrame:
    return pd.DataFrame({"rep": np.arange(len(pvalues)), "pvalue": pvalues})


def panel_frame(grid: np.ndarray, cdf_values: np.ndarray) -> pd.DataFrame:
    """
    Long format: one row per (grid point, outer draw).
    """

    m = cdf_values.shape[0]
    return pd.DataFrame({
        "grid_point": np.tile(grid, m),
        "row": np.repeat(np.arange(m), grid.size),
        "value": cdf_values.ravel(),
    })


def fanchart_frame(summary) -> pd.DataFrame:
    """
    Long format: one row per (grid point, series) with series in average, lower, upper.
    """

    series = {"average": summary.average_cdf, "lower": summary.lower_band, "upper": summary.upper_band}
    return pd.concat([
        pd.DataFrame({"grid_point": summary.grid, "band": name, "value": values})
        for name, values in series.items()
    ], ignore_index=True)
