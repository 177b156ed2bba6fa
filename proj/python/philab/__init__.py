"""Python access to the philab experiments."""

import json

from . import _philab
from ._philab import ValidationError, new_simple_ratio

schema_version = _philab.schema_version


def run(subcommand, config="", seed=None, threads=None, tol=None):
    """Run a subcommand and return the artifact as a dict.

    `config` is TOML text. The dict carries the artifact fields plus
    `columns`, `rows` and `exit_status`.
    """
    return json.loads(_philab.run(subcommand, config, seed, threads, tol))


def config_hash(subcommand, config="", seed=None):
    return _philab.config_hash(subcommand, config, seed)


def resolved_config(subcommand, config=""):
    return json.loads(_philab.resolved_config(subcommand, config))


def hemisphere_functional(xi, config="", sign=1):
    return _philab.hemisphere_functional(config, list(xi), sign)


__all__ = [
    "ValidationError",
    "config_hash",
    "hemisphere_functional",
    "new_simple_ratio",
    "resolved_config",
    "run",
    "schema_version",
]
