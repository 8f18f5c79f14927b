"""Flat spacetime in 1+1 or 2+1 dimensions, with c = 1."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import isfinite, sqrt
from typing import Mapping, Sequence

import numpy as np

SIMULTANEITY_TOL = 1e-9
LIGHTLIKE_TOL = 1e-12


class DimensionMismatch(ValueError):
    pass


class NotSpacelikeSolvable(ValueError):
    """No inertial frame makes the given events simultaneous."""


class NotSimultaneous(ValueError):
    """Cut events do not share a time coordinate in the given frame."""


class AmbiguousCut(ValueError):
    """An event outside the cut lies on the cut's simultaneity surface."""


@dataclass(frozen=True)
class SpacetimeEvent:
    t: float
    x: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "x", tuple(float(c) for c in self.x))
        if len(self.x) not in (1, 2):
            raise DimensionMismatch(f"events have 1 or 2 spatial coordinates, got {len(self.x)}")
        if not all(isfinite(c) for c in (self.t, *self.x)):
            raise ValueError("event coordinates must be finite")

    @property
    def ndim(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class InertialFrame:
    velocity: tuple[float, ...]

    def __post_init__(self) -> None:
        v = tuple(float(c) for c in self.velocity)
        object.__setattr__(self, "velocity", v)
        if not all(isfinite(c) for c in v):
            raise ValueError("velocity must be finite")
        if self.speed >= 1.0:
            raise ValueError(f"|v| must be < 1, got {self.speed!r}")

    @classmethod
    def rest(cls, ndim: int) -> "InertialFrame":
        return cls((0.0,) * ndim)

    @property
    def speed(self) -> float:
        return sqrt(sum(c * c for c in self.velocity))

    @property
    def gamma(self) -> float:
        return 1.0 / sqrt(1.0 - self.speed**2)


class IntervalKind(enum.Enum):
    SPACELIKE = "Spacelike"
    TIMELIKE = "Timelike"
    LIGHTLIKE = "Lightlike"


@dataclass(frozen=True)
class IntervalClass:
    kind: IntervalKind
    s2: float


def _check_dims(*events: SpacetimeEvent) -> None:
    if len({e.ndim for e in events}) > 1:
        raise DimensionMismatch("events do not share spatial dimensionality")


def interval(e1: SpacetimeEvent, e2: SpacetimeEvent, tol: float = LIGHTLIKE_TOL) -> IntervalClass:
    """Signed squared interval |dx|^2 - dt^2 and its causal class."""
    _check_dims(e1, e2)
    s2 = sum((a - b) ** 2 for a, b in zip(e1.x, e2.x)) - (e1.t - e2.t) ** 2
    if abs(s2) < tol:
        return IntervalClass(IntervalKind.LIGHTLIKE, s2)
    return IntervalClass(IntervalKind.SPACELIKE if s2 > 0 else IntervalKind.TIMELIKE, s2)


def boosted_time(frame: InertialFrame, e: SpacetimeEvent) -> float:
    """``t - v.x``: the boosted time coordinate without its positive factor gamma."""
    if len(frame.velocity) != e.ndim:
        raise DimensionMismatch(f"{len(frame.velocity)}-d velocity for a {e.ndim}-d event")
    return e.t - sum(v * x for v, x in zip(frame.velocity, e.x))


def boost(frame: InertialFrame, e: SpacetimeEvent) -> SpacetimeEvent:
    """Full Lorentz boost of ``e`` into ``frame``."""
    if len(frame.velocity) != e.ndim:
        raise DimensionMismatch(f"{len(frame.velocity)}-d velocity for a {e.ndim}-d event")
    v = np.array(frame.velocity)
    x = np.array(e.x)
    g = frame.gamma
    t_new = g * (e.t - v @ x)
    speed2 = v @ v
    if speed2 == 0.0:
        return SpacetimeEvent(e.t, e.x)
    parallel = (v @ x) / speed2 * v
    x_new = x + (g - 1.0) * parallel - g * e.t * v
    return SpacetimeEvent(t_new, tuple(x_new))


def simultaneity_frame(events: Sequence[SpacetimeEvent], tol: float = SIMULTANEITY_TOL) -> InertialFrame:
    """The unique frame in which ``events`` share one time coordinate.

    Solves ``v.(x_i - x_0) = t_i - t_0``.  The system must determine ``v``
    completely: two events in 1+1 dimensions, three non-collinear events in
    2+1 dimensions.  Events that are not pairwise spacelike, and underdetermined,
    inconsistent or superluminal systems, raise :class:`NotSpacelikeSolvable`.
    """
    events = list(events)
    if len(events) < 2:
        raise NotSpacelikeSolvable("need at least two events")
    _check_dims(*events)
    if len(set(events)) != len(events):
        raise NotSpacelikeSolvable("events must be pairwise distinct")
    for i, e1 in enumerate(events):
        for e2 in events[i + 1:]:
            if interval(e1, e2).kind is not IntervalKind.SPACELIKE:
                raise NotSpacelikeSolvable(f"events at t={e1.t:g} and t={e2.t:g} are not spacelike separated")
    base = events[0]
    a = np.array([[xi - x0 for xi, x0 in zip(e.x, base.x)] for e in events[1:]])
    b = np.array([e.t - base.t for e in events[1:]])
    if np.linalg.matrix_rank(a, tol=tol) < base.ndim:
        raise NotSpacelikeSolvable("events do not determine a unique frame (singular system)")
    v, *_ = np.linalg.lstsq(a, b, rcond=None)
    if np.max(np.abs(a @ v - b)) > tol:
        raise NotSpacelikeSolvable("no velocity makes these events simultaneous (inconsistent system)")
    speed = float(np.linalg.norm(v))
    if speed >= 1.0:
        raise NotSpacelikeSolvable(f"simultaneity would need |v| = {speed:.6g} >= 1")
    # round-off from the solve; far below any simultaneity tolerance
    v[np.abs(v) < 1e-14] = 0.0
    return InertialFrame(tuple(float(c) + 0.0 for c in v))


@dataclass(frozen=True)
class CausalPartition:
    before: tuple[str, ...]
    at_cut: tuple[str, ...]
    after: tuple[str, ...]
    times: tuple[tuple[str, float], ...]


def causal_partition(
    frame: InertialFrame,
    cut: Sequence[str],
    events: Mapping[str, SpacetimeEvent],
    tol: float = SIMULTANEITY_TOL,
) -> CausalPartition:
    """Split named ``events`` into before / on / after the cut's surface of simultaneity.

    Each group is ordered by boosted time, then by name.
    """
    cut = sorted(set(cut))
    if not cut:
        raise ValueError("cut is empty")
    times = {name: boosted_time(frame, e) for name, e in events.items()}
    missing = [name for name in cut if name not in times]
    if missing:
        raise KeyError(f"cut events {missing} are not in the event set")
    level = times[cut[0]]
    off = [name for name in cut if abs(times[name] - level) > tol]
    if off:
        raise NotSimultaneous(f"cut events {off} are not simultaneous with {cut[0]} in this frame")
    before, after = [], []
    for name, t in times.items():
        if name in cut:
            continue
        if abs(t - level) <= tol:
            raise AmbiguousCut(f"event {name!r} lies on the surface of simultaneity of {cut}")
        (before if t < level else after).append(name)
    key = lambda n: (times[n], n)  # noqa: E731
    return CausalPartition(
        tuple(sorted(before, key=key)),
        tuple(cut),
        tuple(sorted(after, key=key)),
        tuple(sorted(times.items(), key=lambda kv: (kv[1], kv[0]))),
    )
