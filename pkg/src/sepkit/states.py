"""Density matrices over multipartite Hilbert spaces and the named operators
used throughout the test batteries (flip, maximally entangled projector,
Pauli matrices, Werner family, random separable mixtures)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    OutOfRangeError,
    UnknownNameError,
    WeightsInvalidError,
    ZeroVectorError,
)
from .tensor_core import (
    HilbertDims,
    as_dims,
    as_matrix,
    hermitian_part,
    identity,
    min_eigenvalue,
    require_hermitian,
)

TRACE_TOL = 1e-10
STATE_PSD_TOL = 1e-9
UNIT_NORM_TOL = 1e-12
WEIGHT_SUM_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ProductVector:
    """Ordered list of complex unit vectors, one per subsystem."""

    locals: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.locals:
            raise DimensionMismatchError("product vector needs at least one local factor")
        clean = []
        for k, v in enumerate(self.locals, start=1):
            v = np.asarray(v, dtype=np.complex128).reshape(-1)
            nrm = float(np.linalg.norm(v))
            if abs(nrm - 1.0) > UNIT_NORM_TOL:
                raise OutOfRangeError(
                    f"local vector {k} violates unit norm: |norm - 1| = {abs(nrm - 1.0):.3e} > {UNIT_NORM_TOL}"
                )
            clean.append(_frozen(v))
        object.__setattr__(self, "locals", tuple(clean))

    @property
    def dims(self) -> HilbertDims:
        return HilbertDims(tuple(len(v) for v in self.locals))

    def full(self) -> np.ndarray:
        """Kronecker product of the local factors as a 1-d vector."""
        out = self.locals[0]
        for v in self.locals[1:]:
            out = np.kron(out, v)
        return out

    def projector(self) -> np.ndarray:
        psi = self.full()
        return np.outer(psi, psi.conj())


@dataclass(frozen=True)
class SeparableDecomposition:
    """Convex mixture of pure product vectors; a separability certificate."""

    weights: tuple[float, ...]
    terms: tuple[ProductVector, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if len(w) != len(self.terms) or not self.terms:
            raise WeightsInvalidError("weights and terms must have equal nonzero length")
        if any(x < 0.0 for x in w):
            raise WeightsInvalidError(f"weights must be nonnegative, got min {min(w):.3e}")
        if abs(sum(w) - 1.0) > WEIGHT_SUM_TOL:
            raise WeightsInvalidError(f"weights must sum to 1 within {WEIGHT_SUM_TOL}, got {sum(w)!r}")
        d0 = self.terms[0].dims
        for t in self.terms[1:]:
            if t.dims != d0:
                raise DimensionMismatchError("all product terms must share the same local dimensions")
        if len(self.terms) > d0.total**2:
            raise WeightsInvalidError(
                f"term count {len(self.terms)} exceeds the N^2 bound ({d0.total**2})"
            )
        object.__setattr__(self, "weights", w)

    @property
    def dims(self) -> HilbertDims:
        return self.terms[0].dims


@dataclass(frozen=True)
class MultipartiteState:
    """Density matrix plus its ordered local dimensions.

    Construction enforces Hermiticity, unit trace (1e-10), and positivity
    (smallest eigenvalue >= -1e-9). An optional separable decomposition acts
    as a machine-checkable separability certificate.
    """

    dims: HilbertDims
    rho: np.ndarray
    decomposition: SeparableDecomposition | None = field(default=None)

    def __post_init__(self):
        d = as_dims(self.dims)
        rho = as_matrix(self.rho)
        if rho.shape != (d.total, d.total):
            raise DimensionMismatchError(
                f"state matrix shape {rho.shape} does not match dims {d.dims}"
            )
        require_hermitian(rho, "density matrix")
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > TRACE_TOL:
            raise OutOfRangeError(f"density matrix trace must be 1 within {TRACE_TOL}, got {tr!r}")
        lam = min_eigenvalue(rho)
        if lam < -STATE_PSD_TOL:
            raise OutOfRangeError(
                f"density matrix must be PSD: min eigenvalue {lam:.3e} < -{STATE_PSD_TOL}"
            )
        if self.decomposition is not None and self.decomposition.dims != d:
            raise DimensionMismatchError("decomposition dims do not match state dims")
        object.__setattr__(self, "dims", d)
        object.__setattr__(self, "rho", _frozen(rho))

    @property
    def n(self) -> int:
        return self.dims.n


def density_from_pure(v: np.ndarray, dims: HilbertDims | Sequence[int] | None = None) -> MultipartiteState:
    """Normalized projector |v><v| / <v|v> as a state."""
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:
        raise ZeroVectorError("cannot normalize the zero vector into a state")
    v = v / nrm
    d = as_dims(dims) if dims is not None else HilbertDims((len(v),))
    return MultipartiteState(d, np.outer(v, v.conj()))


def assemble_separable(decomp: SeparableDecomposition, dims: HilbertDims | Sequence[int]) -> MultipartiteState:
    """Mixture sum_i p_i |phi_i1><phi_i1| x ... x |phi_in><phi_in|.

    The returned state keeps ``decomp`` attached as its separability
    certificate.
    """
    d = as_dims(dims)
    if decomp.dims != d:
        raise DimensionMismatchError(
            f"decomposition dims {decomp.dims.dims} do not match requested dims {d.dims}"
        )
    rho = np.zeros((d.total, d.total), dtype=np.complex128)
    for w, term in zip(decomp.weights, decomp.terms):
        psi = term.full()
        rho += w * np.outer(psi, psi.conj())
    return MultipartiteState(d, hermitian_part(rho), decomposition=decomp)


_KET0 = np.array([1.0, 0.0], dtype=np.complex128)
_KET1 = np.array([0.0, 1.0], dtype=np.complex128)
_PAULI = {
    "pauli_x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "pauli_y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "pauli_z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def max_entangled_vector(d: int) -> np.ndarray:
    """(1/sqrt(d)) sum_k |kk>."""
    v = np.zeros(d * d, dtype=np.complex128)
    for k in range(d):
        v[k * d + k] = 1.0
    return v / np.sqrt(d)


def flip_operator(d: int) -> np.ndarray:
    """Swap of the two tensor factors: V |a>|b> = |b>|a>."""
    v = np.zeros((d * d, d * d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            v[b * d + a, a * d + b] = 1.0
    return v


def singlet_vector() -> np.ndarray:
    return (np.kron(_KET0, _KET1) - np.kron(_KET1, _KET0)) / np.sqrt(2.0)


def named_operator(name: str, d: int = 2) -> np.ndarray:
    """Catalog of named vectors and operators.

    ``P_plus`` is the normalized maximally entangled projector (trace 1);
    ``flip_V`` is the factor swap; ``plus_vec``/``minus_vec`` are the
    (|0> +- |1>)/sqrt(2) vectors. Pauli matrices, ``Psi_minus`` and the
    +-vectors require d = 2.
    """
    d = int(d)
    if d < 2:
        raise OutOfRangeError(f"local dimension must be >= 2, got {d}")
    qubit_only = {"pauli_x", "pauli_y", "pauli_z", "plus_vec", "minus_vec", "Psi_minus"}
    if name in qubit_only and d != 2:
        raise OutOfRangeError(f"{name} is only defined for d = 2, got d = {d}")
    if name == "identity":
        return identity(d)
    if name in _PAULI:
        return _PAULI[name].copy()
    if name == "plus_vec":
        return (_KET0 + _KET1) / np.sqrt(2.0)
    if name == "minus_vec":
        return (_KET0 - _KET1) / np.sqrt(2.0)
    if name == "P_plus":
        psi = max_entangled_vector(d)
        return np.outer(psi, psi.conj())
    if name == "Psi_minus":
        psi = singlet_vector()
        return np.outer(psi, psi.conj())
    if name == "flip_V":
        return flip_operator(d)
    raise UnknownNameError(f"unknown operator name {name!r}")


def werner_state(p: float) -> MultipartiteState:
    """p * singlet projector + (1-p) * I/4 on two qubits, 0 <= p <= 1."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise OutOfRangeError(f"werner parameter must lie in [0, 1], got {p}")
    rho = p * named_operator("Psi_minus") + (1.0 - p) * identity(4) / 4.0
    return MultipartiteState(HilbertDims((2, 2)), rho)


def maximally_mixed(dims: HilbertDims | Sequence[int]) -> MultipartiteState:
    d = as_dims(dims)
    return MultipartiteState(d, identity(d.total) / d.total)


def haar_local_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    """Unit vector from the unitarily invariant measure on C^d."""
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def haar_product_vector(dims: HilbertDims | Sequence[int], rng: np.random.Generator) -> ProductVector:
    d = as_dims(dims)
    return ProductVector(tuple(haar_local_vector(dk, rng) for dk in d.dims))


def haar_product_locals_batch(
    dims: HilbertDims | Sequence[int], count: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """Batch of Haar product vectors, one ``(count, d_k)`` array per site."""
    d = as_dims(dims)
    out = []
    for dk in d.dims:
        z = rng.standard_normal((count, dk)) + 1j * rng.standard_normal((count, dk))
        out.append(z / np.linalg.norm(z, axis=1, keepdims=True))
    return out


def random_separable(dims: HilbertDims | Sequence[int], k: int, seed: int = 0) -> MultipartiteState:
    """Mixture of k Haar-random product vectors with uniform simplex weights.

    Deterministic for a fixed seed: weights are drawn first (normalized unit
    exponentials), then the local vectors term by term, site by site.
    """
    d = as_dims(dims)
    k = int(k)
    if not 1 <= k <= d.total**2:
        raise OutOfRangeError(f"term count k must satisfy 1 <= k <= N^2 = {d.total ** 2}, got {k}")
    rng = np.random.default_rng(seed)
    w = rng.exponential(1.0, size=k)
    w = w / w.sum()
    terms = tuple(haar_product_vector(d, rng) for _ in range(k))
    return assemble_separable(SeparableDecomposition(tuple(w), terms), d)
