"""Curve definitions: the expression language, CurveModel and built-in fixtures."""

from .model import CurveModel, eval_jet, load_curve, parse_curve, sample_grid
from .parser import format_expr, parse_expr
from .zoo import BUILTIN_NAMES, builtin

__all__ = [
    "BUILTIN_NAMES",
    "CurveModel",
    "builtin",
    "eval_jet",
    "format_expr",
    "load_curve",
    "parse_curve",
    "parse_expr",
    "sample_grid",
]
