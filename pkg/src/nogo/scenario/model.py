"""Scenario data model: registers, agents and spacetime-located measurements."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Union

import numpy as np

from .. import quantum as qm
from ..quantum import ProjectiveMeasurement, Register
from ..spacetime import SpacetimeEvent

FRIEND = "friend"
SUPERMEASUREMENT = "supermeasurement"
KINDS = (FRIEND, SUPERMEASUREMENT)
BUILTIN_STATES = ("hardy", "ghz")


@dataclass(frozen=True)
class Agent:
    name: str
    memory: str


@dataclass(frozen=True)
class NamedBasis:
    """One of the qubit bases ``Z``, ``X`` or ``Y``."""

    name: str

    def outcomes(self) -> tuple[tuple[str, np.ndarray], ...]:
        return qm.NAMED_BASES[self.name]


@dataclass(frozen=True)
class ExplicitBasis:
    vectors: tuple[tuple[str, tuple[complex, ...]], ...]

    def outcomes(self) -> tuple[tuple[str, np.ndarray], ...]:
        return tuple((label, np.array(v, dtype=np.complex128)) for label, v in self.vectors)


@dataclass(frozen=True)
class UndoBasis:
    """Supermeasurement basis: the friend's dilation applied to ``effective``."""

    undoes: str
    effective: Union[NamedBasis, ExplicitBasis]


Basis = Union[NamedBasis, ExplicitBasis, UndoBasis]


@dataclass(frozen=True)
class ScenarioMeasurement:
    agent: str
    kind: str
    event: SpacetimeEvent
    targets: tuple[str, ...]
    basis: Basis
    memory: str

    @property
    def undoes(self) -> str | None:
        return self.basis.undoes if isinstance(self.basis, UndoBasis) else None


@dataclass(frozen=True)
class BuiltinState:
    name: str


@dataclass(frozen=True)
class AmplitudeState:
    """Amplitudes over the system registers; memory registers start ready."""

    amplitudes: tuple[complex, ...]


InitialState = Union[BuiltinState, AmplitudeState]


@dataclass(frozen=True)
class FrameOverride:
    velocity: tuple[float, ...]
    measured: tuple[str, ...]


@dataclass(frozen=True)
class Scenario:
    name: str
    registers: tuple[Register, ...]
    state: InitialState
    agents: tuple[Agent, ...]
    measurements: tuple[ScenarioMeasurement, ...]
    spacelike_required: tuple[tuple[str, str], ...]
    frames: tuple[FrameOverride, ...] = field(default=())

    def register_dim(self, label: str) -> int:
        for r in self.registers:
            if r.label == label:
                return r.dim
        raise qm.LayoutError(f"unknown register {label!r}")

    def measurement(self, agent: str) -> ScenarioMeasurement:
        for m in self.measurements:
            if m.agent == agent:
                return m
        raise KeyError(f"no measurement for agent {agent!r}")

    @property
    def agent_names(self) -> tuple[str, ...]:
        return tuple(sorted(m.agent for m in self.measurements))

    @property
    def events(self) -> dict[str, SpacetimeEvent]:
        return {m.agent: m.event for m in self.measurements}

    @property
    def memory_registers(self) -> frozenset[str]:
        return frozenset(m.memory for m in self.measurements)

    @property
    def system_registers(self) -> tuple[Register, ...]:
        """Registers that no measurement uses as its memory, in declared order."""
        return tuple(r for r in self.registers if r.label not in self.memory_registers)

    def initial_vector(self) -> np.ndarray:
        """Initial amplitudes over :attr:`system_registers`."""
        system = self.system_registers
        dims = tuple(r.dim for r in system)
        if isinstance(self.state, BuiltinState):
            expected = {"hardy": (2, 2), "ghz": (2, 2, 2)}[self.state.name]
            if dims != expected:
                raise qm.LayoutError(f"builtin state {self.state.name!r} needs system registers of dims {expected}")
            return qm.HARDY_AMPLITUDES.copy() if self.state.name == "hardy" else qm.GHZ_AMPLITUDES.copy()
        v = np.array(self.state.amplitudes, dtype=np.complex128)
        if v.size != prod(dims):
            raise qm.StateError(f"{v.size} amplitudes for system registers of total dim {prod(dims)}")
        return v

    @cached_property
    def resolved(self) -> dict[str, ProjectiveMeasurement]:
        """Every agent's measurement as a :class:`ProjectiveMeasurement`."""
        out: dict[str, ProjectiveMeasurement] = {}
        for m in sorted(self.measurements, key=lambda m: m.kind != FRIEND):
            out[m.agent] = resolve(self, m, out)
        return out


def resolve(
    s: Scenario, m: ScenarioMeasurement, friends: dict[str, ProjectiveMeasurement]
) -> ProjectiveMeasurement:
    memory_dim = s.register_dim(m.memory)
    if isinstance(m.basis, UndoBasis):
        friend = friends[m.basis.undoes]
        return qm.supermeasurement(friend, m.basis.effective.outcomes(), m.memory, memory_dim)
    dims = tuple(s.register_dim(t) for t in m.targets)
    return ProjectiveMeasurement(m.targets, dims, m.basis.outcomes(), m.memory, memory_dim)
