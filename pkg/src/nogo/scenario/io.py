"""Reading and writing scenario files (JSON).

A scenario file looks like::

    {
      "name": "hardy",
      "registers": [{"label": "C", "dim": 2}, {"label": "P1", "dim": 2}, ...],
      "state": {"builtin": "hardy"},
      "agents": [{"name": "alice", "memory": "A"}, ...],
      "measurements": [
        {"agent": "charlie", "kind": "friend", "t": 0, "x": [0],
         "targets": ["P1"], "basis": "Z", "memory": "C"},
        {"agent": "alice", "kind": "supermeasurement", "t": 1, "x": [0],
         "targets": ["C", "P1"], "basis": {"undoes": "charlie", "effective_basis": "X"},
         "memory": "A"},
        ...
      ],
      "spacelike_required": [["alice", "bob"], ...],
      "frames": [{"velocity": [-0.25], "measured": ["alice", "daniela"]}]
    }

``state`` is either ``{"builtin": "hardy" | "ghz"}`` or ``{"amplitudes":
[[re, im], ...]}`` over the system registers (those that are nobody's memory)
in declared order.  Numbers may be written as expressions such as
``"1/sqrt(3)"``.  ``name`` and ``frames`` are optional; when ``frames`` is
present those cuts are analysed instead of enumerating every cut.
"""

from __future__ import annotations

import ast
import json
import math
import operator
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Iterator

from ..quantum import Register
from ..spacetime import SpacetimeEvent
from .model import (
    AmplitudeState,
    Agent,
    Basis,
    BuiltinState,
    ExplicitBasis,
    FrameOverride,
    NamedBasis,
    Scenario,
    ScenarioMeasurement,
    UndoBasis,
)
from .validate import STRUCTURAL, validate

TOP_LEVEL = ("name", "registers", "state", "agents", "measurements", "spacelike_required", "frames")
REQUIRED = ("registers", "state", "agents", "measurements", "spacelike_required")
MEASUREMENT_FIELDS = ("agent", "kind", "t", "x", "targets", "basis", "memory")
MAX_EXPRESSION = 200


@dataclass(frozen=True)
class Issue:
    code: str
    where: str
    message: str
    line: int | None = None

    def __str__(self) -> str:
        loc = f"line {self.line}" if self.line is not None else (self.where or "document")
        return f"{self.code} at {loc}: {self.message}"


class ScenarioError(ValueError):
    def __init__(self, issues: list[Issue]):
        self.issues = tuple(issues)
        super().__init__("; ".join(str(i) for i in self.issues))

    @property
    def codes(self) -> list[str]:
        return [i.code for i in self.issues]


class ParseError(ScenarioError):
    """The text is not a JSON document."""


class SchemaError(ScenarioError):
    """A field is missing, unknown or of the wrong type."""


class SemanticError(ScenarioError):
    """The document is well-formed but references or bases are inconsistent."""


class _Skip(Exception):
    pass


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv, ast.Pow: operator.pow}
_FUNCS = {"sqrt": math.sqrt}
_CONSTS = {"pi": math.pi}


def evaluate_expression(text: str) -> float:
    """Evaluate a small arithmetic expression like ``"1/sqrt(3)"`` in floats."""
    if len(text) > MAX_EXPRESSION:
        raise ValueError("expression too long")

    def ev(node: ast.AST) -> float:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) in (int, float):
            return float(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            value = ev(node.operand)
            return -value if isinstance(node.op, ast.USub) else value
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.Name) and node.id in _CONSTS:
            return _CONSTS[node.id]
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and len(node.args) == 1
            and not node.keywords
        ):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(f"unsupported syntax {type(node).__name__}")

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError, RecursionError, MemoryError, TypeError) as exc:
        raise ValueError(f"cannot evaluate {text!r}: {exc}") from None
    if isinstance(value, complex) or not math.isfinite(value):
        raise ValueError(f"{text!r} does not evaluate to a finite real number")
    return value


class _Reader:
    def __init__(self) -> None:
        self.issues: list[Issue] = []

    def fail(self, code: str, where: str, message: str) -> None:
        self.issues.append(Issue(code, where, message))
        raise _Skip

    @contextmanager
    def item(self) -> Iterator[None]:
        try:
            yield
        except _Skip:
            pass

    def obj(self, value: Any, where: str, fields: tuple[str, ...], required: tuple[str, ...]) -> dict:
        if not isinstance(value, dict):
            self.fail("WrongType", where, f"expected an object, got {type(value).__name__}")
        unknown = [k for k in value if k not in fields]
        if unknown:
            self.fail("UnknownField", where, f"unknown field(s) {unknown}; allowed: {list(fields)}")
        missing = [k for k in required if k not in value]
        if missing:
            self.fail("MissingField", where, f"missing required field(s) {missing}")
        return value

    def seq(self, value: Any, where: str) -> list:
        if not isinstance(value, list):
            self.fail("WrongType", where, f"expected a list, got {type(value).__name__}")
        return value

    def text(self, value: Any, where: str) -> str:
        if not isinstance(value, str) or not value:
            self.fail("WrongType", where, f"expected a non-empty string, got {value!r:.60}")
        return value

    def integer(self, value: Any, where: str) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            self.fail("WrongType", where, f"expected an integer, got {value!r:.60}")
        return value

    def number(self, value: Any, where: str) -> float:
        if isinstance(value, str):
            try:
                return evaluate_expression(value)
            except ValueError as exc:
                self.fail("BadExpression", where, str(exc))
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail("WrongType", where, f"expected a number, got {value!r:.60}")
        try:
            value = float(value)
        except OverflowError:
            value = math.inf
        if not math.isfinite(value):
            self.fail("WrongType", where, "number is not finite")
        return value

    def amplitudes(self, value: Any, where: str) -> tuple[complex, ...]:
        out = []
        for i, pair in enumerate(self.seq(value, where)):
            if not isinstance(pair, list) or len(pair) != 2:
                self.fail("WrongType", f"{where}[{i}]", "amplitudes are [re, im] pairs")
            out.append(complex(self.number(pair[0], f"{where}[{i}][0]"), self.number(pair[1], f"{where}[{i}][1]")))
        return tuple(out)

    def names(self, value: Any, where: str) -> tuple[str, ...]:
        return tuple(self.text(v, f"{where}[{i}]") for i, v in enumerate(self.seq(value, where)))


def _read_basis(r: _Reader, value: Any, where: str) -> Basis:
    if isinstance(value, str):
        return NamedBasis(value)
    if isinstance(value, dict) and "undoes" in value:
        d = r.obj(value, where, ("undoes", "effective_basis"), ("undoes", "effective_basis"))
        effective = _read_basis(r, d["effective_basis"], f"{where}.effective_basis")
        if isinstance(effective, UndoBasis):
            r.fail("WrongType", f"{where}.effective_basis", "effective basis cannot itself undo a measurement")
        return UndoBasis(r.text(d["undoes"], f"{where}.undoes"), effective)
    d = r.obj(value, where, ("vectors",), ("vectors",))
    vectors = []
    for i, entry in enumerate(r.seq(d["vectors"], f"{where}.vectors")):
        w = f"{where}.vectors[{i}]"
        e = r.obj(entry, w, ("label", "amplitudes"), ("label", "amplitudes"))
        vectors.append((r.text(e["label"], f"{w}.label"), r.amplitudes(e["amplitudes"], f"{w}.amplitudes")))
    return ExplicitBasis(tuple(vectors))


def _read_measurement(r: _Reader, value: Any, where: str) -> ScenarioMeasurement:
    d = r.obj(value, where, MEASUREMENT_FIELDS, MEASUREMENT_FIELDS)
    agent = r.text(d["agent"], f"{where}.agent")
    kind = r.text(d["kind"], f"{where}.kind")
    if kind not in ("friend", "supermeasurement"):
        r.fail("BadValue", f"{where}.kind", f"kind must be 'friend' or 'supermeasurement', got {kind!r}")
    t = r.number(d["t"], f"{where}.t")
    x = tuple(r.number(c, f"{where}.x[{i}]") for i, c in enumerate(r.seq(d["x"], f"{where}.x")))
    if len(x) not in (1, 2):
        r.fail("BadValue", f"{where}.x", f"events have 1 or 2 spatial coordinates, got {len(x)}")
    targets = r.names(d["targets"], f"{where}.targets")
    basis = _read_basis(r, d["basis"], f"{where}.basis")
    memory = r.text(d["memory"], f"{where}.memory")
    return ScenarioMeasurement(agent, kind, SpacetimeEvent(t, x), targets, basis, memory)


def _read(r: _Reader, doc: Any) -> Scenario | None:
    try:
        d = r.obj(doc, "", TOP_LEVEL, REQUIRED)
    except _Skip:
        return None

    name = "scenario"
    with r.item():
        if "name" in d:
            name = r.text(d["name"], "name")

    registers = []
    with r.item():
        for i, entry in enumerate(r.seq(d["registers"], "registers")):
            with r.item():
                e = r.obj(entry, f"registers[{i}]", ("label", "dim"), ("label", "dim"))
                registers.append(Register(r.text(e["label"], f"registers[{i}].label"), r.integer(e["dim"], f"registers[{i}].dim")))

    state = None
    with r.item():
        s = d["state"]
        if isinstance(s, dict) and "builtin" in s:
            s = r.obj(s, "state", ("builtin",), ("builtin",))
            builtin = r.text(s["builtin"], "state.builtin")
            if builtin not in ("hardy", "ghz"):
                r.fail("BadValue", "state.builtin", f"builtin state must be 'hardy' or 'ghz', got {builtin!r}")
            state = BuiltinState(builtin)
        else:
            s = r.obj(s, "state", ("amplitudes",), ("amplitudes",))
            state = AmplitudeState(r.amplitudes(s["amplitudes"], "state.amplitudes"))

    agents = []
    with r.item():
        for i, entry in enumerate(r.seq(d["agents"], "agents")):
            with r.item():
                e = r.obj(entry, f"agents[{i}]", ("name", "memory"), ("name", "memory"))
                agents.append(Agent(r.text(e["name"], f"agents[{i}].name"), r.text(e["memory"], f"agents[{i}].memory")))

    measurements = []
    with r.item():
        for i, entry in enumerate(r.seq(d["measurements"], "measurements")):
            with r.item():
                measurements.append(_read_measurement(r, entry, f"measurements[{i}]"))

    pairs = []
    with r.item():
        for i, entry in enumerate(r.seq(d["spacelike_required"], "spacelike_required")):
            with r.item():
                pair = r.names(entry, f"spacelike_required[{i}]")
                if len(pair) != 2:
                    r.fail("WrongType", f"spacelike_required[{i}]", "expected a pair of agent names")
                pairs.append(pair)

    frames = []
    with r.item():
        for i, entry in enumerate(r.seq(d.get("frames", []), "frames")):
            with r.item():
                w = f"frames[{i}]"
                e = r.obj(entry, w, ("velocity", "measured"), ("velocity", "measured"))
                v = e["velocity"]
                velocity = (
                    tuple(r.number(c, f"{w}.velocity[{j}]") for j, c in enumerate(v))
                    if isinstance(v, list)
                    else (r.number(v, f"{w}.velocity"),)
                )
                frames.append(FrameOverride(velocity, tuple(sorted(r.names(e["measured"], f"{w}.measured")))))

    if r.issues:
        return None
    return Scenario(name, tuple(registers), state, tuple(agents), tuple(measurements), tuple(pairs), tuple(frames))


def _reject_constant(token: str) -> float:
    raise ValueError(f"non-finite number {token}")


def parse_scenario(text: str | bytes) -> Scenario:
    """Parse a scenario document.

    Raises :class:`ParseError`, :class:`SchemaError` or :class:`SemanticError`
    (all :class:`ScenarioError`) carrying the list of issues found.  Geometric
    and normalization invariants are left to :func:`validate`.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError([Issue("InvalidUTF8", "", str(exc))]) from None
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError([Issue("InvalidJSON", "", exc.msg, line=exc.lineno)]) from None
    except (ValueError, RecursionError) as exc:
        raise ParseError([Issue("InvalidJSON", "", str(exc))]) from None

    reader = _Reader()
    scenario = _read(reader, doc)
    if scenario is None:
        raise SchemaError(reader.issues)
    fatal = [v for v in validate(scenario, max_dim=float("inf")) if v.code in STRUCTURAL]
    if fatal:
        raise SemanticError([Issue(v.code, v.where, v.message) for v in fatal])
    return scenario


def _number(x: float) -> float | int:
    x = float(x) + 0.0
    return int(x) if x.is_integer() and abs(x) < 2**53 else x


def _pairs(amplitudes) -> list[list[float]]:
    return [[_number(c.real), _number(c.imag)] for c in amplitudes]


def _basis_doc(basis: Basis) -> Any:
    if isinstance(basis, NamedBasis):
        return basis.name
    if isinstance(basis, UndoBasis):
        return {"undoes": basis.undoes, "effective_basis": _basis_doc(basis.effective)}
    return {"vectors": [{"label": label, "amplitudes": _pairs(v)} for label, v in basis.vectors]}


def scenario_document(s: Scenario) -> dict:
    doc: dict[str, Any] = {
        "name": s.name,
        "registers": [{"label": r.label, "dim": r.dim} for r in s.registers],
        "state": {"builtin": s.state.name} if isinstance(s.state, BuiltinState) else {"amplitudes": _pairs(s.state.amplitudes)},
        "agents": [{"name": a.name, "memory": a.memory} for a in s.agents],
        "measurements": [
            {
                "agent": m.agent,
                "kind": m.kind,
                "t": _number(m.event.t),
                "x": [_number(c) for c in m.event.x],
                "targets": list(m.targets),
                "basis": _basis_doc(m.basis),
                "memory": m.memory,
            }
            for m in s.measurements
        ],
        "spacelike_required": [list(p) for p in s.spacelike_required],
    }
    if s.frames:
        doc["frames"] = [{"velocity": [_number(c) for c in f.velocity], "measured": list(f.measured)} for f in s.frames]
    return doc


def serialize_scenario(s: Scenario) -> str:
    return json.dumps(scenario_document(s), indent=2, ensure_ascii=False) + "\n"
