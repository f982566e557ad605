"""Dense complex matrix algebra and multipartite index manipulation.

All operators are plain ``numpy.ndarray`` of dtype complex128; subsystem
indices are 1-based everywhere in the public interface. Matrices stay dense:
the target scale is a handful of qubits (dimension <= 64), so there is no
sparse path.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import BadSubsetError, DimensionMismatchError, NotHermitianError

HERMITICITY_RTOL = 1e-10
PSD_TOL = 1e-9


@dataclass(frozen=True)
class HilbertDims:
    """Ordered local dimensions of a multipartite Hilbert space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        if not self.dims:
            raise DimensionMismatchError("dims list must be nonempty")
        clean = tuple(int(d) for d in self.dims)
        if any(d < 2 for d in clean):
            raise DimensionMismatchError(f"every local dimension must be >= 2, got {clean}")
        object.__setattr__(self, "dims", clean)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n(self) -> int:
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)


def as_dims(dims: HilbertDims | Sequence[int]) -> HilbertDims:
    """Coerce a dimension list into :class:`HilbertDims`."""
    if isinstance(dims, HilbertDims):
        return dims
    return HilbertDims(tuple(dims))


def as_matrix(m) -> np.ndarray:
    """View input as a 2-d complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-d matrix, got ndim={a.ndim}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def hermiticity_defect(m: np.ndarray) -> float:
    """max |M[i,j] - conj(M[j,i])|."""
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def is_hermitian(m: np.ndarray, rtol: float = HERMITICITY_RTOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return hermiticity_defect(m) <= rtol * (1.0 + max_abs(m))


def require_hermitian(m: np.ndarray, what: str = "matrix", rtol: float = HERMITICITY_RTOL) -> np.ndarray:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise NotHermitianError(f"{what} is not square: shape {m.shape}")
    defect = hermiticity_defect(m)
    bound = rtol * (1.0 + max_abs(m))
    if defect > bound:
        raise NotHermitianError(
            f"{what} violates Hermiticity tolerance: defect {defect:.3e} > {bound:.3e}"
        )
    return m


def hermitian_part(m: np.ndarray) -> np.ndarray:
    """(M + M^dag)/2; used to scrub roundoff dust off known-Hermitian results."""
    return (m + dagger(m)) / 2.0


def identity(d: int) -> np.ndarray:
    return np.eye(int(d), dtype=np.complex128)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with complex128 output."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    return reduce(kron, mats)


def eig_hermitian(m: np.ndarray, what: str = "matrix") -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and unitary ``v``
    whose columns satisfy ``m = v @ diag(w) @ v^dag``. Raises
    :class:`NotHermitianError` if the input exceeds the Hermiticity tolerance.
    """
    m = require_hermitian(m, what)
    w, v = np.linalg.eigh(m)
    return w, v


def min_eigenvalue(m: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix (tolerant of roundoff dust)."""
    return float(np.linalg.eigvalsh(hermitian_part(as_matrix(m)))[0])


def is_psd(m: np.ndarray, tol: float | None = None) -> bool:
    m = as_matrix(m)
    if tol is None:
        tol = PSD_TOL * (1.0 + max_abs(m))
    return is_hermitian(m) and min_eigenvalue(m) >= -tol


def _validated_square(m: np.ndarray, d: HilbertDims) -> np.ndarray:
    m = as_matrix(m)
    if m.shape != (d.total, d.total):
        raise DimensionMismatchError(
            f"matrix shape {m.shape} does not match dims {d.dims} (total {d.total})"
        )
    return m


def _validated_subset(subset: Iterable[int], n: int) -> tuple[int, ...]:
    sub = tuple(sorted({int(k) for k in subset}))
    for k in sub:
        if not 1 <= k <= n:
            raise BadSubsetError(f"subsystem index {k} outside 1..{n}")
    return sub


def partial_transpose(m: np.ndarray, dims: HilbertDims | Sequence[int], subset: Iterable[int]) -> np.ndarray:
    """Transpose the tensor factors listed in ``subset`` (1-based).

    Applying the same subset twice restores the input; the operation is an
    isometry of the Hilbert-Schmidt inner product.
    """
    d = as_dims(dims)
    m = _validated_square(m, d)
    sub = _validated_subset(subset, d.n)
    if not sub:
        return m.copy()
    t = m.reshape(d.dims + d.dims)
    axes = list(range(2 * d.n))
    for k in sub:
        axes[k - 1], axes[d.n + k - 1] = axes[d.n + k - 1], axes[k - 1]
    return np.ascontiguousarray(t.transpose(axes)).reshape(d.total, d.total)


def partial_trace(m: np.ndarray, dims: HilbertDims | Sequence[int], subset: Iterable[int]) -> np.ndarray:
    """Trace out the subsystems in ``subset`` (1-based), keeping the rest in order."""
    d = as_dims(dims)
    m = _validated_square(m, d)
    sub = _validated_subset(subset, d.n)
    if not sub:
        return m.copy()
    if len(sub) == d.n:
        return np.array([[np.trace(m)]], dtype=np.complex128)
    letters = string.ascii_letters
    if 2 * d.n > len(letters):
        raise DimensionMismatchError("too many subsystems for einsum labels")
    row = list(letters[: d.n])
    col = list(letters[d.n : 2 * d.n])
    for k in sub:
        col[k - 1] = row[k - 1]
    keep = [k for k in range(d.n) if (k + 1) not in sub]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    t = m.reshape(d.dims + d.dims)
    kept_total = int(np.prod([d.dims[k] for k in keep]))
    return np.einsum("".join(row + col) + "->" + out, t).reshape(kept_total, kept_total)


def permute_subsystems(m: np.ndarray, dims: HilbertDims | Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: new factor ``p`` is old factor ``perm[p]`` (1-based).

    Equivalent to conjugation by the subsystem-permutation unitary. The
    identity permutation is a no-op and composition follows
    ``permute(permute(m, p), q) = permute(m, [p[q_i - 1] for q_i in q])``.
    """
    d = as_dims(dims)
    m = _validated_square(m, d)
    order = [int(p) - 1 for p in perm]
    if sorted(order) != list(range(d.n)):
        raise DimensionMismatchError(f"perm {tuple(perm)} is not a permutation of 1..{d.n}")
    t = m.reshape(d.dims + d.dims)
    axes = order + [d.n + o for o in order]
    return np.ascontiguousarray(t.transpose(axes)).reshape(d.total, d.total)


def permuted_dims(dims: HilbertDims | Sequence[int], perm: Sequence[int]) -> HilbertDims:
    """Dimension list matching :func:`permute_subsystems` output."""
    d = as_dims(dims)
    return HilbertDims(tuple(d.dims[int(p) - 1] for p in perm))


def hs_inner(x: np.ndarray, y: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product Tr(X^dag Y)."""
    return complex(np.trace(dagger(x) @ y))
