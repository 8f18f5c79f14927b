"""Frame-dependent quantum predictions for extended Wigner's-friend scenarios,
and a possibilistic check of whether absolute outcomes can agree with them."""

__version__ = "0.1.0"

from .fiqt import FramePrediction, analyse, enumerate_cuts, predict
from .possibilistic import find_contradictions
from .scenario import build_ghz, build_hardy, parse_scenario, serialize_scenario, validate

__all__ = [
    "FramePrediction",
    "analyse",
    "build_ghz",
    "build_hardy",
    "enumerate_cuts",
    "find_contradictions",
    "parse_scenario",
    "predict",
    "serialize_scenario",
    "validate",
]
