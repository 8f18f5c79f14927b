"""Dense complex linear algebra on small Hilbert spaces.

Vectors and maps are plain ``numpy`` arrays of dtype ``complex128``.  Every
composite index is big-endian over the declared register order: for
registers with dimensions ``(d0, d1, ..., dn)`` the basis state
``|i0 i1 ... in>`` lives at ``((i0 * d1 + i1) * d2 + i2) ...``.
"""

from __future__ import annotations

from math import prod
from typing import Sequence

import numpy as np

MAX_DIM = 64
DEFAULT_ATOL = 1e-10


class ShapeError(ValueError):
    """Operands have incompatible dimensions."""


class CapacityExceeded(ValueError):
    """A composite space would exceed the configured dimension cap."""


class RegisterIndexError(IndexError):
    """A register index is out of range or repeated."""


def as_vector(values) -> np.ndarray:
    v = np.asarray(values, dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise ShapeError(f"expected a non-empty 1-d amplitude vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("amplitude vector has non-finite entries")
    return v


def as_map(values) -> np.ndarray:
    m = np.asarray(values, dtype=np.complex128)
    if m.ndim != 2 or m.size == 0:
        raise ShapeError(f"expected a non-empty 2-d linear map, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("linear map has non-finite entries")
    return m


def _check_cap(dim: int, max_dim: int) -> None:
    if dim > max_dim:
        raise CapacityExceeded(f"dimension {dim} exceeds cap {max_dim}")


def basis_vector(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return v


def tensor(a, b, *, max_dim: int = MAX_DIM) -> np.ndarray:
    """Tensor product ``a ⊗ b``; index is ``i_a * dim(b) + i_b``."""
    a, b = as_vector(a), as_vector(b)
    _check_cap(a.size * b.size, max_dim)
    return np.kron(a, b)


def inner(a, b) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    a, b = as_vector(a), as_vector(b)
    if a.size != b.size:
        raise ShapeError(f"inner product of dims {a.size} and {b.size}")
    return complex(np.vdot(a, b))


def norm_squared(v) -> float:
    v = as_vector(v)
    return float(np.vdot(v, v).real)


def apply(m, v) -> np.ndarray:
    m, v = as_map(m), as_vector(v)
    if m.shape[1] != v.size:
        raise ShapeError(f"map with {m.shape[1]} columns applied to dim {v.size}")
    return m @ v


def kron(m1, m2, *, max_dim: int = MAX_DIM) -> np.ndarray:
    m1, m2 = as_map(m1), as_map(m2)
    _check_cap(max(m1.shape[0] * m2.shape[0], m1.shape[1] * m2.shape[1]), max_dim)
    return np.kron(m1, m2)


def adjoint(m) -> np.ndarray:
    return as_map(m).conj().T


def outer(a, b) -> np.ndarray:
    """``|a><b|``."""
    return np.outer(as_vector(a), as_vector(b).conj())


def _check_targets(targets: Sequence[int], n: int) -> list[int]:
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise RegisterIndexError(f"repeated register index in {targets}")
    for t in targets:
        if not 0 <= t < n:
            raise RegisterIndexError(f"register index {t} outside layout of {n} registers")
    return targets


def reorder(v, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Permute the tensor factors of ``v``.

    ``v`` is laid out over registers with dimensions ``dims``; the result is laid
    out over the registers ``order[0], order[1], ...`` of the original layout.
    """
    v = as_vector(v)
    dims = tuple(int(d) for d in dims)
    order = _check_targets(order, len(dims))
    if len(order) != len(dims):
        raise ShapeError("reorder needs a full permutation of the registers")
    if prod(dims) != v.size:
        raise ShapeError(f"vector of dim {v.size} does not match registers {dims}")
    return v.reshape(dims).transpose(order).reshape(-1)


def embed(m, targets: Sequence[int], dims: Sequence[int], *, max_dim: int = MAX_DIM) -> np.ndarray:
    """Lift ``m`` acting on ``targets`` (in that factor order) to the full layout.

    The returned operator acts as ``m`` on the target registers and as the
    identity on every other register.
    """
    m = as_map(m)
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    targets = _check_targets(targets, n)
    target_dim = prod(dims[t] for t in targets)
    if m.shape != (target_dim, target_dim):
        raise ShapeError(f"map of shape {m.shape} does not act on targets of dim {target_dim}")
    total = prod(dims)
    _check_cap(total, max_dim)

    rest = [i for i in range(n) if i not in targets]
    full = np.kron(m, np.eye(prod(dims[i] for i in rest), dtype=np.complex128))
    order = targets + rest
    full = full.reshape([dims[i] for i in order] * 2)
    position = [order.index(i) for i in range(n)]
    full = full.transpose(position + [n + p for p in position])
    return full.reshape(total, total)


def is_isometry(m, atol: float = DEFAULT_ATOL) -> bool:
    m = as_map(m)
    return bool(np.allclose(adjoint(m) @ m, np.eye(m.shape[1]), atol=atol, rtol=0.0))
