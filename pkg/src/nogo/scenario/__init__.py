"""Scenario model, built-in scenarios, validation and the JSON file format."""

from .builtins import BUILTINS, GHZ_WINGS, HARDY_EVENTS, build_ghz, build_hardy
from .io import (
    Issue,
    ParseError,
    ScenarioError,
    SchemaError,
    SemanticError,
    parse_scenario,
    scenario_document,
    serialize_scenario,
)
from .model import (
    FRIEND,
    SUPERMEASUREMENT,
    Agent,
    AmplitudeState,
    BuiltinState,
    ExplicitBasis,
    FrameOverride,
    NamedBasis,
    Scenario,
    ScenarioMeasurement,
    UndoBasis,
)
from .validate import CODES, STRUCTURAL, Violation, validate

__all__ = [
    "BUILTINS",
    "CODES",
    "FRIEND",
    "GHZ_WINGS",
    "HARDY_EVENTS",
    "STRUCTURAL",
    "SUPERMEASUREMENT",
    "Agent",
    "AmplitudeState",
    "BuiltinState",
    "ExplicitBasis",
    "FrameOverride",
    "Issue",
    "NamedBasis",
    "ParseError",
    "Scenario",
    "ScenarioError",
    "ScenarioMeasurement",
    "SchemaError",
    "SemanticError",
    "UndoBasis",
    "Violation",
    "build_ghz",
    "build_hardy",
    "parse_scenario",
    "scenario_document",
    "serialize_scenario",
    "validate",
]
