"""Python bindings for the augsindy core.

The functions take and return NumPy arrays and plain dicts; see each
function's docstring for the keys it returns.
"""

from ._core import (
    AugsindyError,
    abs_correlation,
    fit,
    format_value,
    learn_basis,
    run_experiment,
    screen,
    select,
    simulate,
    stls,
    system_names,
)

__all__ = [
    "AugsindyError",
    "abs_correlation",
    "fit",
    "format_value",
    "learn_basis",
    "run_experiment",
    "screen",
    "select",
    "simulate",
    "stls",
    "system_names",
]
