"""Pure states, projective measurements and their unitary dilations.

A measurement is modelled unitarily by an isometry that copies the outcome
index into a memory register prepared in its ready state ``|0>``.  Listed
outcome vectors need not span the target space; the orthogonal complement is
then one extra outcome labelled ``⊥``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import prod, sqrt
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg_core as la

REMAINDER = "⊥"
READY = 0


class LayoutError(ValueError):
    pass


class BasisError(ValueError):
    pass


class StateError(ValueError):
    pass


class TargetClash(ValueError):
    pass


class OutcomeError(KeyError):
    pass


@dataclass(frozen=True)
class Register:
    label: str
    dim: int


@dataclass(frozen=True)
class RegisterLayout:
    registers: tuple[Register, ...]
    max_dim: int = field(default=la.MAX_DIM, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "registers", tuple(self.registers))
        labels = [r.label for r in self.registers]
        if not labels:
            raise LayoutError("layout needs at least one register")
        if len(set(labels)) != len(labels):
            raise LayoutError(f"duplicate register labels in {labels}")
        for r in self.registers:
            if int(r.dim) < 2:
                raise LayoutError(f"register {r.label!r} has dimension {r.dim} < 2")
        if self.dim > self.max_dim:
            raise la.CapacityExceeded(f"layout of dimension {self.dim} exceeds cap {self.max_dim}")

    @classmethod
    def of(cls, *pairs: tuple[str, int], max_dim: int = la.MAX_DIM) -> "RegisterLayout":
        return cls(tuple(Register(label, dim) for label, dim in pairs), max_dim=max_dim)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(r.label for r in self.registers)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(r.dim for r in self.registers)

    @property
    def dim(self) -> int:
        return prod(self.dims)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LayoutError(f"register {label!r} not in layout {self.labels}") from None

    def indices(self, labels: Iterable[str]) -> list[int]:
        return [self.index(label) for label in labels]

    def dim_of(self, labels: Iterable[str]) -> int:
        return prod(self.dims[i] for i in self.indices(labels))


@dataclass(frozen=True, eq=False)
class PureState:
    layout: RegisterLayout
    vector: np.ndarray

    def __post_init__(self) -> None:
        v = la.as_vector(self.vector)
        if v.size != self.layout.dim:
            raise StateError(f"vector of dim {v.size} on layout of dim {self.layout.dim}")
        if abs(la.norm_squared(v) - 1.0) > 1e-10:
            raise StateError(f"state not normalized: <v|v> = {la.norm_squared(v)!r}")
        v.setflags(write=False)
        object.__setattr__(self, "vector", v)

    def amplitude(self, *digits: int) -> complex:
        return complex(self.vector[np.ravel_multi_index(digits, self.layout.dims)])

    def evolve(self, operator: np.ndarray, targets: Sequence[str]) -> "PureState":
        full = la.embed(operator, self.layout.indices(targets), self.layout.dims, max_dim=self.layout.max_dim)
        return PureState(self.layout, la.apply(full, self.vector))


def product_state(
    layout: RegisterLayout, placed: Sequence[tuple[Sequence[str], Sequence[complex]]] = ()
) -> PureState:
    """State with each ``(labels, vector)`` factor on its registers, ready elsewhere."""
    order: list[int] = []
    vector = np.ones(1, dtype=np.complex128)
    for labels, amplitudes in placed:
        idx = layout.indices(labels)
        amplitudes = la.as_vector(amplitudes)
        if amplitudes.size != prod(layout.dims[i] for i in idx):
            raise StateError(f"factor of dim {amplitudes.size} does not fit registers {tuple(labels)}")
        order += idx
        vector = np.kron(vector, amplitudes)
    if len(set(order)) != len(order):
        raise LayoutError("a register appears in more than one factor")
    for i, d in enumerate(layout.dims):
        if i not in order:
            order.append(i)
            vector = np.kron(vector, la.basis_vector(d, READY))
    dims_in_order = [layout.dims[i] for i in order]
    position = [order.index(i) for i in range(len(order))]
    return PureState(layout, la.reorder(vector, dims_in_order, position))


HARDY_AMPLITUDES = np.array([1, 1, 1, 0], dtype=np.complex128) / sqrt(3)
GHZ_AMPLITUDES = np.array([1, 0, 0, 0, 0, 0, 0, 1], dtype=np.complex128) / sqrt(2)


def _require_qubits(layout: RegisterLayout, labels: Sequence[str]) -> None:
    for label in labels:
        if layout.dims[layout.index(label)] != 2:
            raise LayoutError(f"register {label!r} is not a qubit")


def hardy_state(layout: RegisterLayout, labels: Sequence[str] = ("P1", "P2")) -> PureState:
    """(|00> + |01> + |10>)/sqrt(3) on ``labels``; every other register ready."""
    _require_qubits(layout, labels)
    if len(labels) != 2:
        raise LayoutError("the Hardy state lives on two qubits")
    return product_state(layout, [(labels, HARDY_AMPLITUDES)])


def ghz_state(layout: RegisterLayout, labels: Sequence[str] | None = None) -> PureState:
    """(|000> + |111>)/sqrt(2) on three qubit registers, ready elsewhere."""
    if labels is None:
        labels = ("P1", "P2", "P3") if len(layout.registers) != 3 else layout.labels
    if len(labels) != 3:
        raise LayoutError("the GHZ state lives on three qubits")
    _require_qubits(layout, labels)
    return product_state(layout, [(labels, GHZ_AMPLITUDES)])


_S = 1 / sqrt(2)
NAMED_BASES: dict[str, tuple[tuple[str, np.ndarray], ...]] = {
    "Z": (("0", np.array([1, 0], dtype=np.complex128)), ("1", np.array([0, 1], dtype=np.complex128))),
    "X": (("+", np.array([_S, _S], dtype=np.complex128)), ("-", np.array([_S, -_S], dtype=np.complex128))),
    "Y": (("+i", np.array([_S, 1j * _S])), ("-i", np.array([_S, -1j * _S]))),
}


def _check_orthonormal(vectors: Sequence[np.ndarray], atol: float = la.DEFAULT_ATOL) -> None:
    if not vectors:
        return
    gram = np.array([[la.inner(a, b) for b in vectors] for a in vectors])
    if not np.allclose(gram, np.eye(len(vectors)), atol=atol, rtol=0.0):
        raise BasisError("outcome vectors are not orthonormal")


def complete_basis(partial: Sequence[Sequence[complex]], dim: int) -> tuple[np.ndarray, ...]:
    """Extend orthonormal ``partial`` to a basis of ``C^dim``.

    Standard basis vectors are orthogonalized against the running set in index
    order; residuals with norm below 1e-8 are dropped.  The result starts with
    ``partial`` unchanged.
    """
    basis = [la.as_vector(v) for v in partial]
    for v in basis:
        if v.size != dim:
            raise BasisError(f"vector of dim {v.size} in a basis of C^{dim}")
    _check_orthonormal(basis)
    if len(basis) > dim:
        raise BasisError(f"{len(basis)} vectors cannot be orthonormal in C^{dim}")
    for i in range(dim):
        if len(basis) == dim:
            break
        r = la.basis_vector(dim, i)
        for _ in range(2):
            for b in basis:
                r = r - np.vdot(b, r) * b
        n = np.linalg.norm(r)
        if n >= 1e-8:
            basis.append(r / n)
    return tuple(basis)


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Projective measurement of ``targets`` recorded in register ``memory``."""

    targets: tuple[str, ...]
    target_dims: tuple[int, ...]
    outcomes: tuple[tuple[str, np.ndarray], ...]
    memory: str
    memory_dim: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "target_dims", tuple(int(d) for d in self.target_dims))
        if len(self.targets) != len(self.target_dims) or not self.targets:
            raise BasisError("each target needs exactly one dimension")
        if len(set(self.targets)) != len(self.targets):
            raise TargetClash(f"repeated target in {self.targets}")
        if self.memory in self.targets:
            raise TargetClash(f"memory register {self.memory!r} is also a target")
        outcomes = tuple((str(label), la.as_vector(v)) for label, v in self.outcomes)
        labels = [label for label, _ in outcomes]
        if len(set(labels)) != len(labels) or REMAINDER in labels:
            raise BasisError(f"outcome labels must be unique and not {REMAINDER!r}: {labels}")
        dim = self.dim
        for label, v in outcomes:
            if v.size != dim:
                raise BasisError(f"outcome {label!r} has dim {v.size}, target space has dim {dim}")
        if len(outcomes) > dim:
            raise BasisError(f"{len(outcomes)} outcomes exceed target dimension {dim}")
        _check_orthonormal([v for _, v in outcomes])
        object.__setattr__(self, "outcomes", outcomes)
        if self.memory_dim < len(self.labels):
            raise BasisError(
                f"memory {self.memory!r} of dim {self.memory_dim} cannot record {len(self.labels)} outcomes"
            )

    @classmethod
    def named(cls, basis: str, target: str, memory: str, memory_dim: int = 2) -> "ProjectiveMeasurement":
        try:
            outcomes = NAMED_BASES[basis]
        except KeyError:
            raise BasisError(f"unknown named basis {basis!r}") from None
        return cls((target,), (2,), outcomes, memory, memory_dim)

    @property
    def dim(self) -> int:
        return prod(self.target_dims)

    @property
    def has_remainder(self) -> bool:
        return len(self.outcomes) < self.dim

    @property
    def labels(self) -> tuple[str, ...]:
        listed = tuple(label for label, _ in self.outcomes)
        return listed + (REMAINDER,) if self.has_remainder else listed

    def record_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise OutcomeError(f"unknown outcome {label!r}; expected one of {self.labels}") from None

    def projector(self, label: str) -> np.ndarray:
        k = self.record_index(label)
        if k < len(self.outcomes):
            return la.outer(self.outcomes[k][1], self.outcomes[k][1])
        completion = complete_basis([v for _, v in self.outcomes], self.dim)[len(self.outcomes):]
        return sum((la.outer(v, v) for v in completion), np.zeros((self.dim, self.dim), dtype=np.complex128))


@dataclass(frozen=True, eq=False)
class DilationIsometry:
    """``V = sum_k P_k ⊗ |k>``, mapping the target space into target ⊗ memory."""

    measurement: ProjectiveMeasurement
    map: np.ndarray

    @property
    def registers(self) -> tuple[str, ...]:
        """Factor order of the output space: targets, then memory."""
        return self.measurement.targets + (self.measurement.memory,)

    def operator(self) -> np.ndarray:
        """``V`` composed with ``I ⊗ <ready|``, as a square map on targets ⊗ memory.

        On states whose memory is ready this acts exactly as ``V``.
        """
        m = self.measurement
        ready = la.basis_vector(m.memory_dim, READY)[None, :]
        return self.map @ np.kron(np.eye(m.dim, dtype=np.complex128), ready)

    def pushed(self, vector: Sequence[complex]) -> np.ndarray:
        """``V|psi>`` laid out as (memory, targets...), the order a superobserver measures."""
        m = self.measurement
        out = la.apply(self.map, vector)
        n = len(m.targets)
        return la.reorder(out, m.target_dims + (m.memory_dim,), [n] + list(range(n)))


def dilate(m: ProjectiveMeasurement) -> DilationIsometry:
    v = np.zeros((m.dim * m.memory_dim, m.dim), dtype=np.complex128)
    for k, label in enumerate(m.labels):
        record = la.basis_vector(m.memory_dim, k)[:, None]
        v += np.kron(m.projector(label), record)
    if not la.is_isometry(v):
        raise BasisError("dilation is not an isometry")
    return DilationIsometry(m, v)


def supermeasurement(
    friend: ProjectiveMeasurement,
    effective: Sequence[tuple[str, Sequence[complex]]],
    memory: str,
    memory_dim: int,
) -> ProjectiveMeasurement:
    """Measurement of (friend memory, friend targets) in the basis ``V|phi>``.

    ``V`` is the friend's dilation: measuring this basis first undoes the
    friend's measurement and then measures ``effective`` on the original targets.
    """
    iso = dilate(friend)
    outcomes = tuple((label, iso.pushed(v)) for label, v in effective)
    return ProjectiveMeasurement(
        (friend.memory,) + friend.targets,
        (friend.memory_dim,) + friend.target_dims,
        outcomes,
        memory,
        memory_dim,
    )


@dataclass(frozen=True)
class Ensemble:
    """Orthogonal branches left by measurements whose records are never read.

    Each vector is unnormalized; the squared norms are the branch weights and
    sum to one.
    """

    layout: RegisterLayout
    vectors: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        vectors = tuple(la.as_vector(v) for v in self.vectors)
        for v in vectors:
            if v.size != self.layout.dim:
                raise StateError(f"branch of dim {v.size} on layout of dim {self.layout.dim}")
            v.setflags(write=False)
        total = sum(la.norm_squared(v) for v in vectors)
        if abs(total - 1.0) > 1e-10:
            raise StateError(f"branch weights sum to {total!r}")
        object.__setattr__(self, "vectors", vectors)

    @classmethod
    def of(cls, state: PureState) -> "Ensemble":
        return cls(state.layout, (state.vector,))

    def evolve(self, operator: np.ndarray, targets: Sequence[str]) -> "Ensemble":
        full = la.embed(operator, self.layout.indices(targets), self.layout.dims, max_dim=self.layout.max_dim)
        return Ensemble(self.layout, tuple(la.apply(full, v) for v in self.vectors))

    def split(self, m: ProjectiveMeasurement) -> "Ensemble":
        """Apply ``m`` without recording it: one branch per nonzero outcome."""
        projectors = _embedded_projectors(self, m)
        branches = []
        for v in self.vectors:
            for label in m.labels:
                w = projectors[label] @ v
                if la.norm_squared(w) > 0.0:
                    branches.append(w)
        return Ensemble(self.layout, tuple(branches))


def _branches(state: PureState | Ensemble) -> tuple[np.ndarray, ...]:
    return state.vectors if isinstance(state, Ensemble) else (state.vector,)


def _check_disjoint(measurements: Sequence[ProjectiveMeasurement]) -> None:
    seen: set[str] = set()
    for m in measurements:
        if seen & set(m.targets):
            raise TargetClash(f"registers {sorted(seen & set(m.targets))} measured twice")
        seen |= set(m.targets)


def _embedded_projectors(state: PureState | Ensemble, m: ProjectiveMeasurement) -> dict[str, np.ndarray]:
    layout = state.layout
    idx = layout.indices(m.targets)
    if tuple(layout.dims[i] for i in idx) != m.target_dims:
        raise LayoutError(f"measurement dims {m.target_dims} do not match layout registers {m.targets}")
    return {label: la.embed(m.projector(label), idx, layout.dims, max_dim=layout.max_dim) for label in m.labels}


def born_joint(state: PureState | Ensemble, selections: Sequence[tuple[ProjectiveMeasurement, str]]) -> float:
    """Probability that every selected measurement yields its selected outcome."""
    _check_disjoint([m for m, _ in selections])
    projectors = []
    for m, label in selections:
        m.record_index(label)
        projectors.append(_embedded_projectors(state, m)[label])
    total = 0.0
    for v in _branches(state):
        for p in projectors:
            v = p @ v
        total += la.norm_squared(v)
    return total


def joint_distribution(
    state: PureState | Ensemble, measurements: Sequence[ProjectiveMeasurement]
) -> dict[tuple[str, ...], float]:
    """Born-rule probabilities of every outcome tuple, ``⊥`` outcomes included."""
    _check_disjoint(measurements)
    projectors = [_embedded_projectors(state, m) for m in measurements]
    out: dict[tuple[str, ...], float] = {}
    for labels in product(*(m.labels for m in measurements)):
        total = 0.0
        for v in _branches(state):
            for table, label in zip(projectors, labels):
                v = table[label] @ v
            total += la.norm_squared(v)
        out[labels] = total
    return out


def expectation(state: PureState, operator: np.ndarray, targets: Sequence[str]) -> complex:
    layout = state.layout
    full = la.embed(operator, layout.indices(targets), layout.dims, max_dim=layout.max_dim)
    return la.inner(state.vector, full @ state.vector)


PAULI: Mapping[str, np.ndarray] = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
