"""Jump-process stability, kinetic Monte Carlo and correlation-hierarchy
toolkit.

Every config-driven entry point accepts either a JSON string or a plain dict
with the same schema as the CLI config files.
"""

import json as _json

from ._core import (
    ConfigError,
    NumericalError,
    ResolutionError,
    __version__,
    horizon,
    ladder,
    majorant_terms,
    operator_norm_bounds,
    optimal,
    q_norm_bound,
)
from . import _core


def _as_text(config):
    if isinstance(config, str):
        return config
    return _json.dumps(config)


def stability(config):
    """Balance-condition verdict for the configured kernels."""
    return _core.stability(_as_text(config))


def model_constants(config):
    """Derived kernel constants (masses, sups, grid geometry)."""
    return _core.model_constants(_as_text(config))


def simulate(config):
    """Kinetic Monte Carlo replicas: density and g(r) with standard errors."""
    return _core.simulate(_as_text(config))


def solve(config):
    """Integrate the truncated correlation hierarchy (RK4)."""
    return _core.solve(_as_text(config))


def picard(config):
    """Duhamel/Picard iteration with successive-difference diagnostics."""
    return _core.picard(_as_text(config))


__all__ = [
    "ConfigError",
    "NumericalError",
    "ResolutionError",
    "__version__",
    "horizon",
    "ladder",
    "majorant_terms",
    "model_constants",
    "operator_norm_bounds",
    "optimal",
    "picard",
    "q_norm_bound",
    "simulate",
    "solve",
    "stability",
]
