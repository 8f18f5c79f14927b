"""Scenario invariant checks.  Violations are returned as data, never raised."""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite, prod, sqrt

import numpy as np

from .. import linalg_core as la
from ..quantum import REMAINDER
from ..spacetime import IntervalKind, interval
from .model import (
    BUILTIN_STATES,
    FRIEND,
    KINDS,
    SUPERMEASUREMENT,
    AmplitudeState,
    BuiltinState,
    ExplicitBasis,
    NamedBasis,
    Scenario,
    UndoBasis,
)

NAMED = ("Z", "X", "Y")

# Violations that leave the scenario's measurements or frames unresolvable.
# parse_scenario rejects these outright; the rest only fail validation.
STRUCTURAL = frozenset(
    {
        "DuplicateRegister",
        "BadRegisterDim",
        "DuplicateAgent",
        "UnknownRegister",
        "UnknownAgent",
        "DuplicateMeasurement",
        "MemoryMismatch",
        "MemoryShared",
        "TargetClash",
        "KindMismatch",
        "BadUndo",
        "SupermeasurementTargets",
        "UnknownBasis",
        "BadOutcomeLabel",
        "BasisDimension",
        "NonOrthonormalBasis",
        "MemoryTooSmall",
        "BuiltinStateMismatch",
        "StateDimension",
        "VelocityOutOfRange",
    }
)
CODES = STRUCTURAL | {"DimensionMismatch", "StateNotNormalized", "SpacelikeRequired", "CapacityExceeded"}


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    where: str = ""

    def __str__(self) -> str:
        loc = f" at {self.where}" if self.where else ""
        return f"{self.code}{loc}: {self.message}"


def _orthonormal(vectors: list[np.ndarray], atol: float = la.DEFAULT_ATOL) -> bool:
    if not vectors:
        return True
    m = np.array(vectors)
    return bool(np.allclose(m.conj() @ m.T, np.eye(len(vectors)), atol=atol, rtol=0.0))


def validate(s: Scenario, max_dim: int = la.MAX_DIM) -> list[Violation]:
    """Every invariant violation of ``s``; empty iff the scenario is analysable."""
    out: list[Violation] = []

    def bad(code: str, message: str, where: str = "") -> None:
        out.append(Violation(code, message, where))

    dims: dict[str, int] = {}
    for i, r in enumerate(s.registers):
        where = f"registers[{i}]"
        if r.label in dims:
            bad("DuplicateRegister", f"register {r.label!r} declared twice", where)
        if not isinstance(r.dim, int) or r.dim < 2:
            bad("BadRegisterDim", f"register {r.label!r} has dimension {r.dim!r}; need an integer >= 2", where)
        dims.setdefault(r.label, r.dim)

    agents: dict[str, str] = {}
    for i, a in enumerate(s.agents):
        where = f"agents[{i}]"
        if a.name in agents:
            bad("DuplicateAgent", f"agent {a.name!r} declared twice", where)
        if a.memory not in dims:
            bad("UnknownRegister", f"agent {a.name!r} has unknown memory register {a.memory!r}", where)
        agents.setdefault(a.name, a.memory)

    by_agent = {}
    memories: dict[str, str] = {}
    for i, m in enumerate(s.measurements):
        where = f"measurements[{i}]"
        if m.agent not in agents:
            bad("UnknownAgent", f"measurement by undeclared agent {m.agent!r}", where)
        elif agents[m.agent] != m.memory:
            bad("MemoryMismatch", f"{m.agent!r} records in {m.memory!r} but declares memory {agents[m.agent]!r}", where)
        if m.agent in by_agent:
            bad("DuplicateMeasurement", f"agent {m.agent!r} measures more than once", where)
        by_agent.setdefault(m.agent, (i, m))
        if m.memory in memories:
            bad("MemoryShared", f"memory {m.memory!r} is shared by {memories[m.memory]!r} and {m.agent!r}", where)
        memories.setdefault(m.memory, m.agent)
        for label in (*m.targets, m.memory):
            if label not in dims:
                bad("UnknownRegister", f"unknown register {label!r}", where)
        if m.memory in m.targets or len(set(m.targets)) != len(m.targets) or not m.targets:
            bad("TargetClash", f"targets {list(m.targets)} must be distinct, non-empty and exclude the memory", where)
        if m.kind not in KINDS:
            bad("KindMismatch", f"unknown kind {m.kind!r}", where)
        elif (m.kind == SUPERMEASUREMENT) != isinstance(m.basis, UndoBasis):
            bad("KindMismatch", "supermeasurements, and only they, specify their basis by 'undoes'", where)

    # A supermeasurement's targets are checked against the measurement it undoes.
    for label in memories:
        for m in s.measurements:
            if label in m.targets and not isinstance(m.basis, UndoBasis):
                bad("TargetClash", f"{m.agent!r} targets memory {label!r} without undoing its owner")

    dims_known = not any(v.code in ("UnknownRegister", "BadRegisterDim", "TargetClash") for v in out)
    if dims_known:
        for i, m in enumerate(s.measurements):
            _check_basis(s, i, m, by_agent, dims, bad)

    _check_state(s, dims, memories, dims_known, bad)

    ndims = {m.event.ndim for m in s.measurements}
    if len(ndims) > 1:
        bad("DimensionMismatch", f"events mix {sorted(ndims)} spatial dimensions", "measurements")

    events = s.events
    for i, (a, b) in enumerate(s.spacelike_required):
        where = f"spacelike_required[{i}]"
        if a not in events or b not in events:
            unknown = [n for n in (a, b) if n not in events]
            bad("UnknownAgent", f"spacelike pair names agents without a measurement: {unknown}", where)
            continue
        if events[a].ndim != events[b].ndim:
            continue
        iv = interval(events[a], events[b])
        if iv.kind is not IntervalKind.SPACELIKE:
            bad("SpacelikeRequired", f"{a} and {b} must be spacelike separated but are {iv.kind.value} (s2 = {iv.s2:g})", where)

    for i, f in enumerate(s.frames):
        where = f"frames[{i}]"
        speed = sqrt(sum(c * c for c in f.velocity)) if all(isfinite(c) for c in f.velocity) else float("inf")
        if speed >= 1.0:
            bad("VelocityOutOfRange", f"|v| must be < 1, got {speed:g}", where)
        if ndims and len(f.velocity) not in ndims:
            bad("DimensionMismatch", f"{len(f.velocity)}-d velocity for {sorted(ndims)}-d events", where)
        unknown = [n for n in f.measured if n not in events]
        if unknown:
            bad("UnknownAgent", f"frame measures agents without a measurement: {unknown}", where)

    if dims_known:
        # Supermeasurement memories are only materialized if one lies before a cut.
        dropped = {m.memory for m in s.measurements if m.kind == SUPERMEASUREMENT}
        core = prod(d for label, d in dims.items() if label not in dropped)
        if core > max_dim:
            bad("CapacityExceeded", f"working space of dimension {core} exceeds cap {max_dim}", "registers")
    return out


def _check_basis(s, i, m, by_agent, dims, bad) -> None:
    where = f"measurements[{i}].basis"
    basis = m.basis
    if isinstance(basis, UndoBasis):
        target = by_agent.get(basis.undoes)
        if target is None or target[1].kind != FRIEND or basis.undoes == m.agent:
            bad("BadUndo", f"'undoes' must name another agent's friend measurement, got {basis.undoes!r}", where)
            return
        friend = target[1]
        expected = (friend.memory,) + friend.targets
        if m.targets != expected:
            bad("SupermeasurementTargets", f"targets must be {list(expected)} (memory, then targets, of {basis.undoes})", where)
        effective_dim = prod(dims[t] for t in friend.targets)
        outcome_count = _check_outcomes(basis.effective, effective_dim, where, bad)
        if outcome_count is None:
            return
        # pushed vectors span a subspace of dim effective_dim inside (memory ⊗ targets)
        total = dims[friend.memory] * effective_dim
    else:
        total = prod(dims[t] for t in m.targets)
        outcome_count = _check_outcomes(basis, total, where, bad)
        if outcome_count is None:
            return
    needed = outcome_count + (1 if outcome_count < total else 0)
    if dims[m.memory] < needed:
        bad("MemoryTooSmall", f"memory {m.memory!r} of dim {dims[m.memory]} cannot record {needed} outcomes", where)


def _check_outcomes(basis, dim: int, where: str, bad) -> int | None:
    if isinstance(basis, NamedBasis):
        if basis.name not in NAMED:
            bad("UnknownBasis", f"unknown named basis {basis.name!r}", where)
            return None
        if dim != 2:
            bad("BasisDimension", f"named basis {basis.name} needs a qubit target, got dimension {dim}", where)
            return None
        return 2
    if not isinstance(basis, ExplicitBasis):
        bad("UnknownBasis", f"unsupported basis {basis!r}", where)
        return None
    labels = [label for label, _ in basis.vectors]
    if len(set(labels)) != len(labels) or REMAINDER in labels or "" in labels:
        bad("BadOutcomeLabel", f"outcome labels must be unique, non-empty and not {REMAINDER!r}: {labels}", where)
        return None
    if not labels:
        bad("BasisDimension", "explicit basis lists no vectors", where)
        return None
    if any(len(v) != dim for _, v in basis.vectors) or len(labels) > dim:
        bad("BasisDimension", f"need at most {dim} vectors of dimension {dim}", where)
        return None
    if not _orthonormal([np.array(v, dtype=np.complex128) for _, v in basis.vectors]):
        bad("NonOrthonormalBasis", "outcome vectors are not orthonormal within 1e-10", where)
        return None
    return len(labels)


def _check_state(s, dims, memories, dims_known, bad) -> None:
    system = [label for label in dims if label not in memories]
    system_dims = tuple(dims[label] for label in system)
    if isinstance(s.state, BuiltinState):
        expected = {"hardy": (2, 2), "ghz": (2, 2, 2)}.get(s.state.name)
        if s.state.name not in BUILTIN_STATES or (dims_known and system_dims != expected):
            bad("BuiltinStateMismatch", f"builtin state {s.state.name!r} does not fit system registers {system}", "state")
        return
    if isinstance(s.state, AmplitudeState):
        amps = np.array(s.state.amplitudes, dtype=np.complex128)
        if dims_known and amps.size != prod(system_dims):
            bad("StateDimension", f"{amps.size} amplitudes for system registers {system} of dim {prod(system_dims)}", "state")
            return
        if abs(float(np.vdot(amps, amps).real) - 1.0) > 1e-10:
            bad("StateNotNormalized", f"<psi|psi> = {float(np.vdot(amps, amps).real):.12g}", "state")
