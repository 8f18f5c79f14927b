"""Frame-dependent Born-rule predictions.

For an inertial frame and a set of measurements simultaneous in it, every
measurement strictly earlier in that frame is replaced by its dilation
isometry, and the Born rule is applied to the measurements on the surface of
simultaneity.  Measurements later than the surface play no role.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

from . import linalg_core as la
from . import quantum as qm
from .possibilistic import ExclusionConstraint, exclusions_from
from .scenario.model import Scenario
from .spacetime import (
    SIMULTANEITY_TOL,
    AmbiguousCut,
    CausalPartition,
    InertialFrame,
    IntervalKind,
    NotSimultaneous,
    NotSpacelikeSolvable,
    causal_partition,
    interval,
    simultaneity_frame,
)

DEFAULT_EPSILON = 1e-10


def format_velocity(frame: InertialFrame) -> str:
    return "(" + ", ".join(format(c + 0.0, ".12g") for c in frame.velocity) + ")"


@dataclass(frozen=True)
class Cut:
    frame: InertialFrame
    partition: CausalPartition

    @property
    def measured(self) -> tuple[str, ...]:
        return self.partition.at_cut

    @property
    def before(self) -> tuple[str, ...]:
        return self.partition.before

    @property
    def after(self) -> tuple[str, ...]:
        return self.partition.after

    @property
    def label(self) -> str:
        return f"{'+'.join(self.measured)}@v={format_velocity(self.frame)}"


def make_cut(s: Scenario, frame: InertialFrame, measured: Sequence[str], tolerance: float = SIMULTANEITY_TOL) -> Cut:
    """Check that ``measured`` lie on one surface of simultaneity of ``frame``.

    Raises :class:`NotSimultaneous` or :class:`AmbiguousCut`.
    """
    return Cut(frame, causal_partition(frame, measured, s.events, tolerance))


@dataclass(frozen=True, eq=False)
class FramePrediction:
    cut: Cut
    outcome_labels: tuple[tuple[str, ...], ...]
    distribution: dict[tuple[str, ...], float]
    zero_patterns: tuple[tuple[str, ...], ...]
    epsilon: float
    state: qm.PureState | qm.Ensemble = field(repr=False)

    @property
    def measured(self) -> tuple[str, ...]:
        return self.cut.measured

    @property
    def source(self) -> str:
        return self.cut.label

    def probability(self, **outcomes: str) -> float:
        """Marginal probability of the given outcomes, e.g. ``p.probability(alice="-")``."""
        unknown = set(outcomes) - set(self.measured)
        if unknown:
            raise KeyError(f"agents {sorted(unknown)} are not measured on {self.source}")
        idx = [(self.measured.index(k), v) for k, v in outcomes.items()]
        return sum(p for o, p in self.distribution.items() if all(o[i] == v for i, v in idx))


def recorded(s: Scenario, cut: Cut) -> frozenset[str]:
    """Measurements before the cut whose memory a later measurement on or before the cut reads.

    Only these need their dilation.  The others are applied as unrecorded
    projective measurements, which leaves every prediction on the surface
    unchanged and keeps their memories out of the working space.
    """
    read = {t for a in (*cut.before, *cut.measured) for t in s.measurement(a).targets}
    return frozenset(a for a in cut.before if s.measurement(a).memory in read)


def working_layout(s: Scenario, cut: Cut, max_dim: int = la.MAX_DIM) -> qm.RegisterLayout:
    """Registers needed for ``cut``: system registers, the targets of every
    measurement before or on the surface and the memories of recorded ones."""
    active = set(cut.before) | set(cut.measured)
    needed = {r.label for r in s.system_registers}
    for m in s.measurements:
        if m.agent in active:
            needed |= set(m.targets)
    needed |= {s.measurement(a).memory for a in recorded(s, cut)}
    return qm.RegisterLayout(tuple(r for r in s.registers if r.label in needed), max_dim=max_dim)


def prepared_state(
    s: Scenario, cut: Cut, max_dim: int = la.MAX_DIM, order: Sequence[str] | None = None
) -> qm.PureState | qm.Ensemble:
    """Initial state evolved by every measurement before the cut.

    Recorded measurements act by their dilation.  If any measurement is left
    unrecorded the result is an :class:`~nogo.quantum.Ensemble`.  ``order``
    overrides the default boosted-time order.
    """
    layout = working_layout(s, cut, max_dim)
    system = [r.label for r in s.system_registers]
    state: qm.PureState | qm.Ensemble = qm.product_state(layout, [(system, s.initial_vector())])
    keep = recorded(s, cut)
    for agent in cut.before if order is None else order:
        m = s.resolved[agent]
        if agent in keep:
            iso = qm.dilate(m)
            state = state.evolve(iso.operator(), iso.registers)
        else:
            state = (state if isinstance(state, qm.Ensemble) else qm.Ensemble.of(state)).split(m)
    return state


def predict(
    s: Scenario,
    frame: InertialFrame,
    measured: Sequence[str],
    *,
    tolerance: float = SIMULTANEITY_TOL,
    epsilon: float = DEFAULT_EPSILON,
    max_dim: int = la.MAX_DIM,
) -> FramePrediction:
    """Joint outcome distribution of ``measured`` with the Heisenberg cut on
    the frame's surface of simultaneity through them."""
    cut = make_cut(s, frame, measured, tolerance)
    return predict_cut(s, cut, epsilon=epsilon, max_dim=max_dim)


def predict_cut(s: Scenario, cut: Cut, *, epsilon: float = DEFAULT_EPSILON, max_dim: int = la.MAX_DIM) -> FramePrediction:
    state = prepared_state(s, cut, max_dim)
    measurements = [s.resolved[a] for a in cut.measured]
    distribution = qm.joint_distribution(state, measurements)
    zero = tuple(o for o, p in distribution.items() if p < epsilon)
    return FramePrediction(cut, tuple(m.labels for m in measurements), distribution, zero, epsilon, state)


@dataclass
class CutSearch:
    cuts: list[Cut]
    skipped: list[tuple[tuple[str, ...], str]]

    def __iter__(self) -> Iterator[Cut]:
        return iter(self.cuts)

    def __len__(self) -> int:
        return len(self.cuts)

    def __getitem__(self, i: int) -> Cut:
        return self.cuts[i]


def enumerate_cuts(s: Scenario, tolerance: float = SIMULTANEITY_TOL) -> CutSearch:
    """Every surface of simultaneity through two or more measurement events.

    A subset qualifies when its events are pairwise spacelike, a unique frame
    makes them simultaneous, and no other event lies on that surface.
    """
    events = s.events
    names = sorted(events)
    cuts: list[Cut] = []
    skipped: list[tuple[tuple[str, ...], str]] = []
    for size in range(2, len(names) + 1):
        for subset in combinations(names, size):
            pairs = [(a, b) for a, b in combinations(subset, 2) if interval(events[a], events[b]).kind is not IntervalKind.SPACELIKE]
            if pairs:
                skipped.append((subset, f"not spacelike separated: {pairs[0][0]}-{pairs[0][1]}"))
                continue
            try:
                frame = simultaneity_frame([events[n] for n in subset], tolerance)
                cuts.append(make_cut(s, frame, subset, tolerance))
            except (NotSpacelikeSolvable, AmbiguousCut, NotSimultaneous) as exc:
                skipped.append((subset, str(exc)))
    cuts.sort(key=lambda c: c.measured)
    return CutSearch(cuts, skipped)


def zero_constraints(p: FramePrediction, epsilon: float | None = None) -> list[ExclusionConstraint]:
    """Exclusion constraints for the outcome tuples ``p`` assigns probability below epsilon."""
    return exclusions_from(p.measured, p.distribution, p.epsilon if epsilon is None else epsilon, p.source)


def analyse(
    s: Scenario,
    *,
    tolerance: float = SIMULTANEITY_TOL,
    epsilon: float = DEFAULT_EPSILON,
    max_dim: int = la.MAX_DIM,
) -> tuple[CutSearch, list[FramePrediction]]:
    """Predictions for the scenario's frame overrides, or for every enumerated cut."""
    if s.frames:
        search = CutSearch(
            [make_cut(s, InertialFrame(f.velocity), f.measured, tolerance) for f in s.frames], []
        )
    else:
        search = enumerate_cuts(s, tolerance)
    return search, [predict_cut(s, c, epsilon=epsilon, max_dim=max_dim) for c in search]

