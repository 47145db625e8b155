"""Utility modules: quadrature node tables and report writers."""

from .quadrature_rules import (
    hermgauss,
    complex_hermgauss,
    leggauss_interval,
    plane_polar_rule,
    hopf_rule,
)
from .reports import parse_p_range, write_report, to_csv_text, to_json_text

__all__ = [
    "hermgauss",
    "complex_hermgauss",
    "leggauss_interval",
    "plane_polar_rule",
    "hopf_rule",
    "parse_p_range",
    "write_report",
    "to_csv_text",
    "to_json_text",
]
