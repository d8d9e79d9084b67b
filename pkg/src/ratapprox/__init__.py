"""Greedy rational approximation of complex functions on curves, regions and point sets."""

from .bary import Barycentric, aaa
from .domain import (
    Arc,
    Circle,
    ParametricCurve,
    Path,
    Region,
    Segment,
    discretize,
    exterior,
    interior,
    polygon,
    squircle,
    unit_circle,
    unit_interval,
)
from .engine import (
    Approximation,
    ConvergenceHistory,
    EngineConfig,
    NoAllowedIterateError,
    approximate,
    check,
    minimax,
)
from .expr import parse_expression
from .parfrac import ArnoldiBasis, PartialFractions, fit_least_squares
from .thiele import Thiele

__all__ = [
    "Approximation",
    "Arc",
    "ArnoldiBasis",
    "Barycentric",
    "Circle",
    "ConvergenceHistory",
    "EngineConfig",
    "NoAllowedIterateError",
    "ParametricCurve",
    "PartialFractions",
    "Path",
    "Region",
    "Segment",
    "Thiele",
    "aaa",
    "approximate",
    "check",
    "discretize",
    "exterior",
    "fit_least_squares",
    "interior",
    "minimax",
    "parse_expression",
    "polygon",
    "squircle",
    "unit_circle",
    "unit_interval",
]
