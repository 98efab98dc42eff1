"""
Utilities
~~~~~~~~~

Config field validation and result emitters.
"""

from .serialize import (
    FORMATS,
    render_results,
    report_to_text,
    results_from_json,
    results_to_csv,
    results_to_gnuplot,
    results_to_json,
    write_text,
)
from .validator import Field, validate_params

__all__ = [
    "FORMATS",
    "Field",
    "render_results",
    "report_to_text",
    "results_from_json",
    "results_to_csv",
    "results_to_gnuplot",
    "results_to_json",
    "validate_params",
    "write_text",
]
