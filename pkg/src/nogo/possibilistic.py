"""Possibility tables over absolute outcome tuples.

Each agent's observed outcome is one variable; an absolute outcome tuple
assigns every variable a label.  Zero-probability predictions become
exclusion constraints, and the possibility table is the product set minus
everything a constraint matches.  Nothing beyond set difference is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import prod
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

import numpy as np

if TYPE_CHECKING:
    from .fiqt import FramePrediction

EXCLUDED_BUT_PREDICTED = "ExcludedButPredicted"
EMPTY_TABLE = "EmptyTable"

Pattern = tuple[tuple[str, str], ...]


class UnknownVariable(KeyError):
    pass


@dataclass(frozen=True)
class OutcomeSpace:
    variables: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self) -> None:
        variables = tuple((name, tuple(labels)) for name, labels in self.variables)
        object.__setattr__(self, "variables", variables)
        names = [name for name, _ in variables]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variables in {names}")
        for name, labels in variables:
            if not labels or len(set(labels)) != len(labels):
                raise ValueError(f"variable {name!r} needs a non-empty set of distinct labels")

    @classmethod
    def of(cls, mapping: Mapping[str, Sequence[str]]) -> "OutcomeSpace":
        return cls(tuple(mapping.items()))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.variables)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(labels) for _, labels in self.variables)

    @property
    def size(self) -> int:
        return prod(self.shape)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariable(f"{name!r} is not a variable of {self.names}") from None

    def labels(self, name: str) -> tuple[str, ...]:
        return self.variables[self.index(name)][1]

    def tuples(self) -> Iterable[tuple[str, ...]]:
        return product(*(labels for _, labels in self.variables))

    def normalize(self, pattern: Mapping[str, str] | Iterable[tuple[str, str]]) -> Pattern:
        items = dict(pattern.items() if isinstance(pattern, Mapping) else pattern)
        for name, label in items.items():
            if label not in self.labels(name):
                raise UnknownVariable(f"{label!r} is not an outcome of {name!r}")
        return tuple(sorted(items.items(), key=lambda kv: self.index(kv[0])))


@dataclass(frozen=True)
class Provenance:
    source: str
    probability: float


@dataclass(frozen=True)
class ExclusionConstraint:
    """A partial assignment that no absolute outcome tuple may match."""

    pattern: Pattern
    provenance: Provenance | None = None

    def __post_init__(self) -> None:
        pattern = tuple((str(k), str(v)) for k, v in self.pattern)
        if not pattern:
            raise ValueError("an exclusion constraint needs a non-empty pattern")
        if len({k for k, _ in pattern}) != len(pattern):
            raise ValueError(f"repeated variable in pattern {pattern}")
        object.__setattr__(self, "pattern", pattern)

    def matches(self, assignment: Mapping[str, str]) -> bool:
        return all(assignment.get(k) == v for k, v in self.pattern)

    def __str__(self) -> str:
        return format_pattern(self.pattern, "!=")


def format_pattern(pattern: Pattern, relation: str = "=") -> str:
    names = ", ".join(k for k, _ in pattern)
    labels = ", ".join(v for _, v in pattern)
    return f"({names}) {relation} ({labels})"


def _coordinates(space: OutcomeSpace) -> np.ndarray:
    return np.indices(space.shape, dtype=np.int32).reshape(len(space.shape), -1)


def _pattern_mask(space: OutcomeSpace, coords: np.ndarray, pattern: Pattern) -> np.ndarray:
    mask = np.ones(coords.shape[1], dtype=bool)
    for name, label in pattern:
        i = space.index(name)
        labels = space.variables[i][1]
        if label not in labels:
            raise UnknownVariable(f"{label!r} is not an outcome of {name!r}")
        mask &= coords[i] == labels.index(label)
    return mask


class PossibilityTable:
    """The absolute outcome tuples compatible with every constraint."""

    def __init__(self, space: OutcomeSpace, constraints: Sequence[ExclusionConstraint], mask: np.ndarray):
        self.space = space
        self.constraints = tuple(constraints)
        self._mask = mask
        self._mask.setflags(write=False)

    @property
    def possible(self) -> frozenset[tuple[str, ...]]:
        coords = _coordinates(self.space)[:, self._mask]
        labels = [lbls for _, lbls in self.space.variables]
        return frozenset(tuple(labels[i][c] for i, c in enumerate(col)) for col in coords.T)

    def __len__(self) -> int:
        return int(self._mask.sum())

    @property
    def is_empty(self) -> bool:
        return not self._mask.any()

    def __contains__(self, assignment: Sequence[str]) -> bool:
        idx = [self.space.variables[i][1].index(v) for i, v in enumerate(assignment)]
        return bool(self._mask[np.ravel_multi_index(idx, self.space.shape)])


def close(space: OutcomeSpace, constraints: Sequence[ExclusionConstraint]) -> PossibilityTable:
    """Remove from ``space`` every tuple matched by some constraint."""
    coords = _coordinates(space)
    excluded = np.zeros(space.size, dtype=bool)
    for c in constraints:
        excluded |= _pattern_mask(space, coords, c.pattern)
    return PossibilityTable(space, constraints, ~excluded)


def _greedy_cover(target: np.ndarray, masks: list[np.ndarray]) -> list[int]:
    """Greedy deletion: drop constraints in order while ``target`` stays covered."""
    count = np.zeros(target.shape, dtype=np.int64)
    for m in masks:
        count += m
    keep = []
    for i, m in enumerate(masks):
        hit = m & target
        if hit.any() and np.all(count[hit] >= 2):
            count -= m
        elif hit.any():
            keep.append(i)
        else:
            count -= m
    return keep


@dataclass(frozen=True)
class Exclusion:
    excluded: bool
    derivation: tuple[ExclusionConstraint, ...]
    witness: tuple[str, ...] | None = None

    def __bool__(self) -> bool:
        return self.excluded


def implies_excluded(table: PossibilityTable, pattern: Mapping[str, str] | Pattern) -> Exclusion:
    """Whether no possible tuple matches ``pattern``, with a small set of constraints proving it.

    When not excluded, ``witness`` is the first possible tuple matching the pattern.
    """
    space = table.space
    pattern = space.normalize(pattern)
    coords = _coordinates(space)
    target = _pattern_mask(space, coords, pattern)
    survivors = target & table._mask
    if survivors.any():
        first = int(np.flatnonzero(survivors)[0])
        digits = np.unravel_index(first, space.shape)
        witness = tuple(space.variables[i][1][d] for i, d in enumerate(digits))
        return Exclusion(False, (), witness)
    masks = [_pattern_mask(space, coords, c.pattern) for c in table.constraints]
    keep = _greedy_cover(target, masks)
    return Exclusion(True, tuple(table.constraints[i] for i in keep))


@dataclass(frozen=True)
class ContradictionReport:
    """A pattern both excluded and predicted, or an empty possibility table."""

    kind: str
    derivation: tuple[ExclusionConstraint, ...]
    pattern: Pattern | None = None
    source: str | None = None
    probability: float | None = None

    def recheck(self, space: OutcomeSpace) -> bool:
        """Re-derive the exclusion from :attr:`derivation` alone."""
        table = close(space, self.derivation)
        if self.kind == EMPTY_TABLE:
            return table.is_empty
        return implies_excluded(table, self.pattern).excluded


def exclusions_from(
    measured: Sequence[str],
    distribution: Mapping[tuple[str, ...], float],
    epsilon: float,
    source: str,
) -> list[ExclusionConstraint]:
    """One constraint per outcome tuple whose probability is below ``epsilon``."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return [
        ExclusionConstraint(tuple(zip(measured, outcome)), Provenance(source, p))
        for outcome, p in distribution.items()
        if p < epsilon
    ]


def outcome_space(predictions: Sequence["FramePrediction"]) -> OutcomeSpace:
    labels: dict[str, tuple[str, ...]] = {}
    for p in predictions:
        for name, lbls in zip(p.measured, p.outcome_labels):
            if labels.setdefault(name, lbls) != lbls:
                raise ValueError(f"predictions disagree on the outcomes of {name!r}")
    return OutcomeSpace(tuple(sorted(labels.items())))


def find_contradictions(
    predictions: Sequence["FramePrediction"],
    epsilon: float,
    space: OutcomeSpace | None = None,
) -> list[ContradictionReport]:
    """Chain every prediction's zero patterns and look for clashes.

    An empty table yields a single EmptyTable report (every pattern is then
    trivially excluded).  Otherwise each pattern with probability >= epsilon
    that the table excludes yields an ExcludedButPredicted report.
    """
    space = space or outcome_space(predictions)
    constraints = [c for p in predictions for c in exclusions_from(p.measured, p.distribution, epsilon, p.source)]
    table = close(space, constraints)
    if table.is_empty:
        coords = _coordinates(space)
        masks = [_pattern_mask(space, coords, c.pattern) for c in constraints]
        keep = _greedy_cover(np.ones(space.size, dtype=bool), masks)
        return [ContradictionReport(EMPTY_TABLE, tuple(constraints[i] for i in keep))]
    reports = []
    for p in predictions:
        for outcome, prob in p.distribution.items():
            if prob < epsilon:
                continue
            pattern = space.normalize(zip(p.measured, outcome))
            ex = implies_excluded(table, pattern)
            if ex:
                reports.append(ContradictionReport(EXCLUDED_BUT_PREDICTED, ex.derivation, pattern, p.source, prob))
    return reports
