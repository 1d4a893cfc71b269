"""Microgrid frequency-regulation simulator with adaptive VSG controllers.

The heavy lifting lives in the compiled extension; this package re-exports
its operations.
"""

from ._core import (
    __version__,
    builtin_scenario_ids,
    compare,
    default_config_json,
    disturbance_metrics,
    fuzzy_adapt,
    run,
    run_csv,
    scenario_json,
)

__all__ = [
    "__version__",
    "builtin_scenario_ids",
    "compare",
    "default_config_json",
    "disturbance_metrics",
    "fuzzy_adapt",
    "run",
    "run_csv",
    "scenario_json",
]
