"""Resummation of divergent and truncated series with self-similar factor approximants.

The main entry points:

- :func:`build` / :func:`evaluate` / :func:`asymptotics` for factor approximants,
- :func:`borel_sum` / :func:`borel_asymptotics` / :func:`select_u` for self-similar
  Borel summation,
- :func:`exponent_estimate` for large-variable exponents from the diff-log series,
- :mod:`selfsim.oracles` for independent reference values,
- :mod:`selfsim.jobs` and the ``selfsim`` command for batch order sweeps.
"""

from .borel import BorelResult, ControlParameter, borel_asymptotics, borel_build, borel_sum, select_u
from .difflog import ExponentEstimate, exponent_estimate
from .errors import ResummationError
from .factor import (
    AsymptoticForm,
    DiagnosticsReport,
    FactorApproximant,
    FactorPair,
    asymptotics,
    build,
    diagnostics,
    evaluate,
)
from .odeseries import OdeSpec, bell_series, kink_series, map_back
from .series import PowerSeries, difflog_series, log_series, moments

__version__ = "0.1.0"

__all__ = [
    "AsymptoticForm", "BorelResult", "ControlParameter", "DiagnosticsReport", "ExponentEstimate",
    "FactorApproximant", "FactorPair", "OdeSpec", "PowerSeries", "ResummationError", "asymptotics",
    "bell_series", "borel_asymptotics", "borel_build", "borel_sum", "build", "diagnostics",
    "difflog_series", "evaluate", "exponent_estimate", "kink_series", "log_series", "map_back",
    "moments", "select_u",
]
