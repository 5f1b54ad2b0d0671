"""
JSON run configuration ingestion
"""

import json
from pathlib import Path

from bootsim.exceptions import ConfigError, FieldMissingError, FieldTypeError
from bootsim.specs import RunConfig


def check_fields(struct: dict):
    """
    Decorator to check required top-level fields and throws exception if any is missing.

    Pass in data structure in dict format:
    {
        "field": type
    }

    If the field is missing, this decorator will throw a FieldMissingError.
    If the field is not of the specified type, this decorator will throw a FieldTypeError.
    """

    def decorator(function):
        def decorated(data: any, *args, **kwargs):
            if not isinstance(data, dict):
                raise ConfigError("Config should be a JSON object")

            for key, value in struct.items():
                if key not in data:
                    raise FieldMissingError(key)

                # bool is an int subclass
                if not isinstance(data[key], value) or isinstance(data[key], bool):
                    raise FieldTypeError(key)

            return function(data, *args, **kwargs)

        return decorated

    return decorator


@check_fields({
    "seed": int,
    "mode": dict,
    "experiment": dict,
})
def parse_run_config(data: dict) -> RunConfig:
    return RunConfig.from_struct(data)


def load_run_config(path: str | Path) -> RunConfig:
    """
    Read and validate a JSON run configuration.

    Malformed JSON is reported with its line and column; schema problems name the offending field
    (e.g. ``experiment.dgp.alpha``).
    """

    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e.strerror}")

    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Malformed JSON in {path} at line {e.lineno}, column {e.colno}: {e.msg}")

    return parse_run_config(data)
