"""Run reports: a JSON-ready dict and its plain-text rendering."""

from __future__ import annotations

import json
from typing import Any, Sequence

from . import __version__
from . import linalg_core as la
from .fiqt import DEFAULT_EPSILON, CutSearch, FramePrediction, analyse, zero_constraints
from .possibilistic import (
    EMPTY_TABLE,
    EXCLUDED_BUT_PREDICTED,
    ContradictionReport,
    ExclusionConstraint,
    find_contradictions,
    format_pattern,
)
from .quantum import REMAINDER
from .scenario.model import Scenario
from .spacetime import SIMULTANEITY_TOL

BASIS_COMPLETION = (
    "supermeasurement bases are completed by Gram-Schmidt over the standard basis in index order; "
    f"the completion is one outcome labelled {REMAINDER}"
)
CONVENTIONS = (
    "registers big-endian in declared order; memories start in |0>; "
    "outcome k of a measurement is recorded as memory state |k>"
)


def _num(x: float) -> float:
    return float(format(float(x) + 0.0, ".12g")) + 0.0


def _constraint(c: ExclusionConstraint) -> dict[str, Any]:
    return {
        "pattern": dict(c.pattern),
        "source": c.provenance.source if c.provenance else None,
        "probability": _num(c.provenance.probability) if c.provenance else None,
    }


def _cut(p: FramePrediction) -> dict[str, Any]:
    return {
        "label": p.source,
        "velocity": [_num(c) for c in p.cut.frame.velocity],
        "measured": list(p.measured),
        "before": list(p.cut.before),
        "after": list(p.cut.after),
        "boosted_times": {name: _num(t) for name, t in p.cut.partition.times},
        "outcomes": [list(labels) for labels in p.outcome_labels],
        "distribution": [{"outcome": list(o), "probability": _num(q)} for o, q in p.distribution.items()],
        "zero_patterns": [list(o) for o in p.zero_patterns],
    }


def _contradiction(r: ContradictionReport) -> dict[str, Any]:
    return {
        "kind": r.kind,
        "pattern": dict(r.pattern) if r.pattern else None,
        "source": r.source,
        "probability": None if r.probability is None else _num(r.probability),
        "derivation": [_constraint(c) for c in r.derivation],
    }


def build_report(
    s: Scenario,
    search: CutSearch,
    predictions: Sequence[FramePrediction],
    contradictions: Sequence[ContradictionReport],
    *,
    epsilon: float,
    tolerance: float,
    max_dim: int,
) -> dict[str, Any]:
    constraints = [c for p in predictions for c in zero_constraints(p, epsilon)]
    return {
        "scenario": s.name,
        "cuts": [_cut(p) for p in predictions],
        "skipped": [{"measured": list(subset), "reason": reason} for subset, reason in search.skipped],
        "constraints": [_constraint(c) for c in constraints],
        "contradictions": [_contradiction(r) for r in contradictions],
        "settings": {
            "epsilon": epsilon,
            "tolerance": tolerance,
            "max_dim": max_dim,
            "basis_completion": BASIS_COMPLETION,
            "conventions": CONVENTIONS,
        },
        "version": __version__,
    }


def run(
    s: Scenario,
    *,
    epsilon: float = DEFAULT_EPSILON,
    tolerance: float = SIMULTANEITY_TOL,
    max_dim: int = la.MAX_DIM,
) -> dict[str, Any]:
    """Enumerate cuts, predict, chain exclusions and package everything as a report."""
    search, predictions = analyse(s, tolerance=tolerance, epsilon=epsilon, max_dim=max_dim)
    contradictions = find_contradictions(predictions, epsilon)
    return build_report(
        s, search, predictions, contradictions, epsilon=epsilon, tolerance=tolerance, max_dim=max_dim
    )


def to_json(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _pattern_text(pattern: dict[str, str], relation: str = "=") -> str:
    return format_pattern(tuple(pattern.items()), relation)


def _names(names: Sequence[str]) -> str:
    return ", ".join(names) if names else "-"


def render_frames(report: dict[str, Any]) -> str:
    lines = [f"scenario {report['scenario']}: {len(report['cuts'])} surfaces of simultaneity"]
    for cut in report["cuts"]:
        v = ", ".join(format(c, ".12g") for c in cut["velocity"])
        lines.append(
            f"  v=({v})  on: {_names(cut['measured'])}  before: {_names(cut['before'])}  after: {_names(cut['after'])}"
        )
    if report["skipped"]:
        lines.append(f"  skipped {len(report['skipped'])} subsets:")
        for entry in report["skipped"]:
            lines.append(f"    {_names(entry['measured'])}: {entry['reason']}")
    return "\n".join(lines) + "\n"


def render_text(report: dict[str, Any]) -> str:
    lines = [f"scenario {report['scenario']}: {len(report['cuts'])} surfaces of simultaneity"]
    for cut in report["cuts"]:
        lines.append(f"  {cut['label']}  before: {_names(cut['before'])}  after: {_names(cut['after'])}")
        plain, remainder = [], 0
        for outcome in cut["zero_patterns"]:
            if REMAINDER in outcome:
                remainder += 1
            else:
                plain.append(outcome)
        for outcome in plain:
            lines.append(f"      excludes {_pattern_text(dict(zip(cut['measured'], outcome)), '!=')}")
        if remainder:
            lines.append(f"      excludes {remainder} patterns with a {REMAINDER} outcome")
        if not plain and not remainder:
            lines.append("      excludes nothing")
    if not report["contradictions"]:
        lines.append("no contradiction: every predicted pattern survives the exclusions")
    for r in report["contradictions"]:
        if r["kind"] == EMPTY_TABLE:
            lines.append(f"contradiction {EMPTY_TABLE}: no absolute outcome tuple survives")
            lines.append(f"    excluded by {len(r['derivation'])} constraints:")
        else:
            lines.append(f"contradiction {EXCLUDED_BUT_PREDICTED}: {_pattern_text(r['pattern'])}")
            lines.append(f"    predicted with p = {r['probability']:.12g} on {r['source']}")
            lines.append("    excluded by:")
        for c in r["derivation"]:
            lines.append(f"      {_pattern_text(c['pattern'], '!='):<40} from {c['source']}")
    settings = report["settings"]
    lines.append(f"epsilon = {settings['epsilon']:g}, tolerance = {settings['tolerance']:g}, max_dim = {settings['max_dim']}")
    lines.append(f"note: {settings['basis_completion']}")
    return "\n".join(lines) + "\n"
