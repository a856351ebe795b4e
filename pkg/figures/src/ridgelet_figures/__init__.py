"""Figure rendering for the experiment CSVs (risk sweep, runtime scaling)."""

from .plots import (
    FIT_MIN_D,
    RISK_HEADER,
    RUNTIME_HEADER,
    SchemaError,
    fit_runtime_exponents,
    load_risk_csv,
    load_runtime_csv,
    plot_risk,
    plot_runtime,
)

__version__ = "0.1.0"
