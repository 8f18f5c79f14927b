"""The two built-in scenarios: Hardy (1+1 dimensions) and the GHZ triangle (2+1)."""

from __future__ import annotations

from itertools import combinations

from ..quantum import Register
from ..spacetime import SpacetimeEvent
from .model import (
    FRIEND,
    SUPERMEASUREMENT,
    Agent,
    BuiltinState,
    NamedBasis,
    Scenario,
    ScenarioMeasurement,
    UndoBasis,
)

HARDY_EVENTS = {
    "charlie": SpacetimeEvent(0.0, (0.0,)),
    "alice": SpacetimeEvent(1.0, (0.0,)),
    "daniela": SpacetimeEvent(0.0, (4.0,)),
    "bob": SpacetimeEvent(1.0, (4.0,)),
}

GHZ_WINGS = ((0.0, 0.0), (10.0, 0.0), (5.0, 8.66))


def build_hardy() -> Scenario:
    """Charlie and Daniela Z-measure the Hardy pair; Alice and Bob undo them and measure X.

    Registers ``C`` and ``D`` are the friends' memory qubits, ``A`` and ``B``
    the four-level memories of the supermeasurements.
    """
    ev = HARDY_EVENTS
    measurements = (
        ScenarioMeasurement("charlie", FRIEND, ev["charlie"], ("P1",), NamedBasis("Z"), "C"),
        ScenarioMeasurement("daniela", FRIEND, ev["daniela"], ("P2",), NamedBasis("Z"), "D"),
        ScenarioMeasurement(
            "alice", SUPERMEASUREMENT, ev["alice"], ("C", "P1"), UndoBasis("charlie", NamedBasis("X")), "A"
        ),
        ScenarioMeasurement(
            "bob", SUPERMEASUREMENT, ev["bob"], ("D", "P2"), UndoBasis("daniela", NamedBasis("X")), "B"
        ),
    )
    return Scenario(
        name="hardy",
        registers=(
            Register("C", 2),
            Register("P1", 2),
            Register("P2", 2),
            Register("D", 2),
            Register("A", 4),
            Register("B", 4),
        ),
        state=BuiltinState("hardy"),
        agents=(Agent("alice", "A"), Agent("bob", "B"), Agent("charlie", "C"), Agent("daniela", "D")),
        measurements=measurements,
        spacelike_required=(("alice", "bob"), ("alice", "daniela"), ("charlie", "bob"), ("charlie", "daniela")),
    )


def build_ghz() -> Scenario:
    """Three friends X-measure a GHZ triple at the corners of a triangle.

    One time unit later, at the same three places, each superobserver undoes
    the local friend and measures Y on the original particle.
    """
    wings = [
        ("charlie", "C", "P1", "alice", "A"),
        ("daniela", "D", "P2", "bob", "B"),
        ("ethan", "E", "P3", "fiona", "F"),
    ]
    registers: list[Register] = []
    friends, supers, agents = [], [], []
    for (friend, fmem, particle, sup, smem), pos in zip(wings, GHZ_WINGS):
        registers += [Register(fmem, 2), Register(particle, 2)]
        friends.append(
            ScenarioMeasurement(friend, FRIEND, SpacetimeEvent(0.0, pos), (particle,), NamedBasis("X"), fmem)
        )
        supers.append(
            ScenarioMeasurement(
                sup, SUPERMEASUREMENT, SpacetimeEvent(1.0, pos), (fmem, particle), UndoBasis(friend, NamedBasis("Y")), smem
            )
        )
        agents += [Agent(friend, fmem), Agent(sup, smem)]
    registers += [Register("A", 4), Register("B", 4), Register("F", 4)]

    wing_of = {}
    for i, (friend, _, _, sup, _) in enumerate(wings):
        wing_of[friend] = wing_of[sup] = i
    names = sorted(wing_of)
    required = tuple((a, b) for a, b in combinations(names, 2) if wing_of[a] != wing_of[b])
    return Scenario(
        name="ghz",
        registers=tuple(registers),
        state=BuiltinState("ghz"),
        agents=tuple(sorted(agents, key=lambda a: a.name)),
        measurements=tuple(friends + supers),
        spacelike_required=required,
    )


BUILTINS = {"hardy": build_hardy, "ghz": build_ghz}
