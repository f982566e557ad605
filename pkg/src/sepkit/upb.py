"""Unextendible product bases, the bound entangled states they generate,
and witness synthesis from them.

A set of mutually orthogonal product vectors spanning a proper subspace is
unextendible when no product vector is orthogonal to all of them; that is
certified numerically by minimizing the product-state overlap with the span
projector and checking it stays strictly positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    ConvergenceFailureError,
    DegenerateOperatorError,
    MissingCertificateError,
    NotDetectingError,
    NotUnextendibleError,
    OrthogonalityViolationError,
    OutOfRangeError,
    UnknownNameError,
)
from .maps_witnesses import Witness
from .product_opt import OptBudget, OptResult, certify
from .states import MultipartiteState, ProductVector
from .tensor_core import (
    HilbertDims,
    as_dims,
    as_matrix,
    hermitian_part,
    identity,
    is_psd,
    require_hermitian,
)

ORTHOGONALITY_TOL = 1e-10
EPSILON_FLOOR = 1e-6


@dataclass(frozen=True)
class UpbSet:
    """Mutually orthogonal product vectors spanning a proper subspace.

    ``epsilon``, when present, is the certified minimum product-state
    overlap with the span projector and must exceed 1e-6 (the
    unextendibility certificate). Construction rejects non-orthogonal
    members, reporting the offending pair and overlap.
    """

    dims: HilbertDims
    members: tuple[ProductVector, ...]
    epsilon: float | None = field(default=None)
    certificate: OptResult | None = field(default=None)

    def __post_init__(self):
        d = as_dims(self.dims)
        members = tuple(self.members)
        if not members:
            raise OutOfRangeError("UPB needs at least one member")
        for k, pv in enumerate(members, start=1):
            if pv.dims != d:
                raise OutOfRangeError(f"member {k} has dims {pv.dims.dims}, expected {d.dims}")
        if len(members) >= d.total:
            raise OutOfRangeError(
                f"member count {len(members)} must stay below the space dimension {d.total} "
                "(the set must not span the whole space)"
            )
        fulls = [pv.full() for pv in members]
        for i in range(len(fulls)):
            for j in range(i + 1, len(fulls)):
                ov = abs(np.vdot(fulls[i], fulls[j]))
                if ov > ORTHOGONALITY_TOL:
                    raise OrthogonalityViolationError(i + 1, j + 1, ov)
        if self.epsilon is not None and self.epsilon <= EPSILON_FLOOR:
            raise NotUnextendibleError(
                f"certified epsilon {self.epsilon:.3e} <= {EPSILON_FLOOR}: a product vector "
                "(nearly) orthogonal to the span exists"
            )
        object.__setattr__(self, "dims", d)
        object.__setattr__(self, "members", members)

    @property
    def verified(self) -> bool:
        return self.epsilon is not None


_Q0 = np.array([1.0, 0.0], dtype=np.complex128)
_Q1 = np.array([0.0, 1.0], dtype=np.complex128)
_QP = (_Q0 + _Q1) / np.sqrt(2.0)
_QM = (_Q0 - _Q1) / np.sqrt(2.0)

_BUILTINS: dict[str, tuple[tuple[np.ndarray, np.ndarray, np.ndarray], ...]] = {
    # canonical three-qubit shifts set
    "shifts": (
        (_Q0, _Q1, _QP),
        (_Q1, _QP, _Q0),
        (_QP, _Q0, _Q1),
        (_QM, _QM, _QM),
    ),
    # variant with the fourth member replaced so all pairs are orthogonal
    "shifts_paper_corrected": (
        (_Q0, _Q0, _Q0),
        (_QP, _Q1, _QM),
        (_Q1, _QM, _QP),
        (_QM, _QP, _Q1),
    ),
}


def builtin_upb(name: str) -> UpbSet:
    """Built-in three-qubit sets; both pass :func:`verify_upb`."""
    if name not in _BUILTINS:
        raise UnknownNameError(
            f"unknown UPB name {name!r}; available: {sorted(_BUILTINS)}"
        )
    members = tuple(ProductVector(locs) for locs in _BUILTINS[name])
    return UpbSet(dims=HilbertDims((2, 2, 2)), members=members)


def span_projector(u: UpbSet) -> np.ndarray:
    """Projector onto the span of the (orthonormal) members."""
    p = np.zeros((u.dims.total, u.dims.total), dtype=np.complex128)
    for pv in u.members:
        psi = pv.full()
        p += np.outer(psi, psi.conj())
    return hermitian_part(p)


def verify_upb(u: UpbSet, budget: OptBudget = OptBudget()) -> UpbSet:
    """Certify unextendibility: epsilon = min product overlap with the span.

    The seesaw minimum is cross-checked against the grid oracle; agreement
    within 1e-3 is required for certification, and epsilon must exceed 1e-6.
    Returns a copy of the set carrying the certified epsilon.
    """
    res = certify(span_projector(u), u.dims, "min", budget)
    if not res.converged:
        raise ConvergenceFailureError(
            "unextendibility check failed its cross-check: "
            f"seesaw {res.value!r} vs grid {res.cross_value!r} differ by more than 1e-3"
        )
    if res.value <= EPSILON_FLOOR:
        raise NotUnextendibleError(
            f"minimum product overlap {res.value:.3e} <= {EPSILON_FLOOR}: a product vector "
            "(nearly) orthogonal to every member exists"
        )
    return replace(u, epsilon=float(res.value), certificate=res)


def bound_entangled_state(u: UpbSet) -> MultipartiteState:
    """Normalized projector onto the orthogonal complement of the span."""
    n_total = u.dims.total
    k = len(u.members)
    rho = (identity(n_total) - span_projector(u)) / (n_total - k)
    return MultipartiteState(u.dims, hermitian_part(rho))


def build_witness(u: UpbSet, probe: np.ndarray | None = None, budget: OptBudget = OptBudget()) -> Witness:
    """Witness P_span - (epsilon/c) * C from a verified set and a PSD probe C.

    ``c`` is the certified maximum of the probe over product states. The
    result is nonnegative on every product state by construction (the span
    term contributes at least epsilon, the probe term at most epsilon) and
    evaluates to -(epsilon/c) * Tr(C rho) < 0 on the bound entangled state,
    so the probe must overlap that state. The returned witness carries its
    own certified product-state minimum.
    """
    if u.epsilon is None:
        raise MissingCertificateError(
            "UPB carries no unextendibility certificate; run verify_upb first"
        )
    c_op = identity(u.dims.total) if probe is None else as_matrix(probe)
    require_hermitian(c_op, "probe operator")
    if c_op.shape != (u.dims.total, u.dims.total):
        raise OutOfRangeError(
            f"probe shape {c_op.shape} does not match dims {u.dims.dims}"
        )
    if not is_psd(c_op):
        raise OutOfRangeError("probe operator must be positive semidefinite")

    rho = bound_entangled_state(u)
    detect = float(np.real(np.trace(c_op @ rho.rho)))
    if detect <= 1e-12:
        raise NotDetectingError(
            f"Tr(C rho) = {detect:.3e} <= 1e-12: probe cannot detect the bound entangled state"
        )
    cres = certify(c_op, u.dims, "max", budget)
    if not cres.converged:
        raise ConvergenceFailureError(
            f"probe maximization failed its cross-check: seesaw {cres.value!r} vs grid {cres.cross_value!r}"
        )
    c_max = cres.value
    if c_max <= 1e-12:
        raise DegenerateOperatorError(
            f"maximum product overlap of the probe is {c_max:.3e} <= 1e-12"
        )
    mat = span_projector(u) - (u.epsilon / c_max) * c_op
    wcert = certify(mat, u.dims, "min", budget)
    if not wcert.converged:
        raise ConvergenceFailureError(
            f"witness certification failed its cross-check: seesaw {wcert.value!r} vs grid {wcert.cross_value!r}"
        )
    if wcert.value < -1e-7:
        raise ConvergenceFailureError(
            f"synthesized witness certifies negative on a product state ({wcert.value:.3e}); "
            "optimizer budgets are inconsistent"
        )
    return Witness(dims=u.dims, matrix=mat, certificate=wcert)
