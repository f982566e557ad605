"""Entanglement witnesses, linear maps positive on product states, the
isomorphism between them, and two-qubit decomposability analysis.

Convention: a map is stored through the Hermitian operator on
``out x in`` whose matrix equals the witness it corresponds to, i.e. the
Choi operator of the map's adjoint built on the unnormalized maximally
entangled vector. With that convention the witness <-> map round trip is
exact, and for a state ``rho`` the scalar bridge

    <Phi+| (I x Lambda_W)(rho) |Phi+> * d_out = Tr(W rho)

holds identically (Phi+ normalized).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import (
    CertificateInvalidError,
    ConvergenceFailureError,
    DimensionMismatchError,
    InfeasibleError,
    OutOfRangeError,
    UnverifiedMapWarning,
    WrongShapeError,
)
from .product_opt import OptBudget, OptResult, certify
from .states import MultipartiteState, named_operator
from .tensor_core import (
    HilbertDims,
    as_dims,
    as_matrix,
    dagger,
    hermitian_part,
    kron,
    max_abs,
    partial_transpose,
    permute_subsystems,
    require_hermitian,
)

WITNESS_CERT_TOL = 1e-7
EVAL_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class Witness:
    """Hermitian operator nonnegative on all product states.

    ``certificate``, when present, is a certified minimum over product
    states and must be >= -1e-7.
    """

    dims: HilbertDims
    matrix: np.ndarray
    certificate: OptResult | None = field(default=None)

    def __post_init__(self):
        d = as_dims(self.dims)
        m = require_hermitian(as_matrix(self.matrix), "witness")
        if m.shape != (d.total, d.total):
            raise DimensionMismatchError(
                f"witness shape {m.shape} does not match dims {d.dims}"
            )
        if self.certificate is not None and self.certificate.value < -WITNESS_CERT_TOL:
            raise CertificateInvalidError(
                "witness certificate reports a negative product-state mean "
                f"({self.certificate.value:.3e} < -{WITNESS_CERT_TOL}); not a witness"
            )
        m = np.array(m, copy=True)
        m.setflags(write=False)
        object.__setattr__(self, "dims", d)
        object.__setattr__(self, "matrix", m)

    @property
    def certified(self) -> bool:
        return self.certificate is not None


@dataclass(frozen=True)
class LinearMapOp:
    """Linear map between operator spaces, stored via its witness operator.

    Maps ``B(in_dims) -> B(out_dims)``; the stored Hermitian ``choi`` lives
    on ``out_dims x in_dims``. Maps built from witnesses have a single
    output factor; ``adjoint_map`` swaps the two blocks, so the output block
    may be composite there.
    """

    in_dims: HilbertDims
    out_dims: HilbertDims
    choi: np.ndarray
    certificate: OptResult | None = field(default=None)

    def __post_init__(self):
        ind = as_dims(self.in_dims)
        outd = as_dims(self.out_dims)
        c = require_hermitian(as_matrix(self.choi), "map operator")
        tot = ind.total * outd.total
        if c.shape != (tot, tot):
            raise DimensionMismatchError(
                f"map operator shape {c.shape} does not match out {outd.dims} x in {ind.dims}"
            )
        c = np.array(c, copy=True)
        c.setflags(write=False)
        object.__setattr__(self, "in_dims", ind)
        object.__setattr__(self, "out_dims", outd)
        object.__setattr__(self, "choi", c)

    @property
    def out_dim(self) -> int:
        return self.out_dims.total

    @property
    def full_dims(self) -> HilbertDims:
        return HilbertDims(self.out_dims.dims + self.in_dims.dims)


@dataclass(frozen=True)
class BlochAction:
    """Scale and output Bloch vector of a two-qubit-to-qubit map action."""

    alpha: float
    k_vec: np.ndarray


def map_from_witness(w: Witness) -> LinearMapOp:
    """Map whose first factor is the witness's first subsystem.

    Inverse of :func:`witness_from_map`; the round trip is exact.
    """
    if w.dims.n < 2:
        raise DimensionMismatchError("witness must act on at least two subsystems")
    return LinearMapOp(
        in_dims=HilbertDims(w.dims.dims[1:]),
        out_dims=HilbertDims((w.dims.dims[0],)),
        choi=w.matrix,
        certificate=w.certificate,
    )


def witness_from_map(m: LinearMapOp) -> Witness:
    """Witness on ``out_dims x in_dims`` carried by the map operator."""
    return Witness(dims=m.full_dims, matrix=m.choi, certificate=m.certificate)


def _action_tensor(m: LinearMapOp) -> np.ndarray:
    dout = m.out_dims.total
    din = m.in_dims.total
    return m.choi.reshape(dout, din, dout, din)


def map_action(m: LinearMapOp, y: np.ndarray) -> np.ndarray:
    """Apply the map to an operator on its full input space."""
    y = as_matrix(y)
    din = m.in_dims.total
    if y.shape != (din, din):
        raise DimensionMismatchError(f"input shape {y.shape} does not match in dims {m.in_dims.dims}")
    c4 = _action_tensor(m)
    return np.einsum("arbs,rs->ab", c4.conj(), y)


def apply_map(m: LinearMapOp, state: MultipartiteState, on: Iterable[int]) -> np.ndarray:
    """(I x Lambda)(rho) with the map consuming the subsystems in ``on``.

    ``on`` lists 1-based subsystem indices in the order matching the map's
    input factors. The output operator carries the untouched subsystems in
    their original order followed by the map's output factors; it is
    Hermitian but in general not PSD (negativity is the entanglement
    signal), and the action is linear in ``rho``.
    """
    on = tuple(int(k) for k in on)
    n = state.dims.n
    if len(set(on)) != len(on) or any(not 1 <= k <= n for k in on):
        raise DimensionMismatchError(f"subsystem list {on} is not a set of indices in 1..{n}")
    got = tuple(state.dims.dims[k - 1] for k in on)
    if got != m.in_dims.dims:
        raise DimensionMismatchError(
            f"subsystems {on} have dims {got}, map expects {m.in_dims.dims}"
        )
    untouched = tuple(k for k in range(1, n + 1) if k not in on)
    perm = untouched + on
    rho_p = permute_subsystems(state.rho, state.dims, perm)
    u_tot = int(np.prod([state.dims.dims[k - 1] for k in untouched])) if untouched else 1
    din = m.in_dims.total
    dout = m.out_dims.total
    t = rho_p.reshape(u_tot, din, u_tot, din)
    c4 = _action_tensor(m)
    out = np.einsum("arbs,urvs->uavb", c4.conj(), t).reshape(u_tot * dout, u_tot * dout)
    return hermitian_part(out)


def applied_dims(m: LinearMapOp, state: MultipartiteState, on: Iterable[int]) -> HilbertDims:
    """Dimension list of the :func:`apply_map` output."""
    on = tuple(int(k) for k in on)
    untouched = tuple(k for k in range(1, state.dims.n + 1) if k not in on)
    return HilbertDims(tuple(state.dims.dims[k - 1] for k in untouched) + m.out_dims.dims)


def eval_witness(w: Witness, state: MultipartiteState) -> float:
    """Tr(W rho); negative values flag entanglement."""
    if w.dims != state.dims:
        raise DimensionMismatchError(
            f"witness dims {w.dims.dims} do not match state dims {state.dims.dims}"
        )
    val = complex(np.trace(w.matrix @ state.rho))
    scale = 1.0 + max_abs(w.matrix)
    if abs(val.imag) > EVAL_IMAG_TOL * scale:
        raise OutOfRangeError(
            f"witness mean value has imaginary residual {val.imag:.3e} beyond tolerance"
        )
    return float(val.real)


def adjoint_map(m: LinearMapOp) -> LinearMapOp:
    """Unique map with Tr(X Lambda(Y)) = Tr(adjoint(X) Y); an involution."""
    dout = m.out_dims.total
    din = m.in_dims.total
    c4 = m.choi.reshape(dout, din, dout, din)
    cadj = np.ascontiguousarray(c4.transpose(1, 0, 3, 2).conj()).reshape(din * dout, din * dout)
    return LinearMapOp(in_dims=m.out_dims, out_dims=m.in_dims, choi=cadj)


_PAULIS = [named_operator("pauli_x"), named_operator("pauli_y"), named_operator("pauli_z")]


def bloch_action(m: LinearMapOp, n_hat: np.ndarray, m_hat: np.ndarray, unit_tol: float = 1e-9) -> BlochAction:
    """Action of a two-qubit-to-qubit map on a pair of Bloch directions.

    Feeds the product state ((I + n.sigma)/2) x ((I + m.sigma)/2) through
    the map and reads off the scale ``alpha = Tr(O)/2`` and the output Bloch
    vector ``k_i = Tr(O sigma_i)/Tr(O)`` (zero when Tr(O) <= 1e-12). For a
    map positive on product states, alpha >= 0 and |k| <= 1.
    """
    if m.in_dims.dims != (2, 2) or m.out_dims.total != 2:
        raise WrongShapeError(
            f"bloch action needs a (2,2) -> 2 map, got in {m.in_dims.dims} out {m.out_dims.dims}"
        )
    n_hat = np.asarray(n_hat, dtype=np.float64).reshape(-1)
    m_hat = np.asarray(m_hat, dtype=np.float64).reshape(-1)
    for name, vec in (("n_hat", n_hat), ("m_hat", m_hat)):
        if vec.shape != (3,) or abs(np.linalg.norm(vec) - 1.0) > unit_tol:
            raise OutOfRangeError(f"{name} must be a unit 3-vector within {unit_tol}")
    rho_n = (np.eye(2, dtype=np.complex128) + sum(c * s for c, s in zip(n_hat, _PAULIS))) / 2.0
    rho_m = (np.eye(2, dtype=np.complex128) + sum(c * s for c, s in zip(m_hat, _PAULIS))) / 2.0
    out = hermitian_part(map_action(m, kron(rho_n, rho_m)))
    tr = float(np.real(np.trace(out)))
    alpha = tr / 2.0
    if tr <= 1e-12:
        k = np.zeros(3)
    else:
        k = np.array([float(np.real(np.trace(out @ s))) / tr for s in _PAULIS])
    return BlochAction(alpha=alpha, k_vec=k)


def certify_witness(w: Witness, budget: OptBudget = OptBudget()) -> Witness:
    """Attach a certified product-state minimum to the witness.

    No-op when a certificate is already cached. Raises
    :class:`ConvergenceFailureError` if the seesaw and grid legs disagree,
    and :class:`CertificateInvalidError` if the certified minimum shows the
    operator is negative on a product state.
    """
    if w.certificate is not None:
        return w
    res = certify(w.matrix, w.dims, "min", budget)
    if not res.converged:
        raise ConvergenceFailureError(
            f"witness certification cross-check failed: seesaw {res.value!r} vs grid {res.cross_value!r}"
        )
    return Witness(dims=w.dims, matrix=w.matrix, certificate=res)


DYKSTRA_MAX_ITER = 50_000
DYKSTRA_STEP_TOL = 1e-8
DECOMP_RESIDUAL_RTOL = 1e-6


def _psd_projection(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(hermitian_part(m))
    wc = np.clip(w, 0.0, None)
    return (v * wc) @ dagger(v)


def decompose_witness_2x2(w: Witness) -> tuple[np.ndarray, np.ndarray]:
    """Split a two-qubit witness as W = A + B^{T2} with A, B PSD.

    Dykstra alternating projections between the PSD x PSD cone and the
    affine set {A + B^{T2} = W}; the affine projection is orthogonal because
    the partial transpose is a Hilbert-Schmidt isometry. Raises
    :class:`InfeasibleError` when the tolerances are not reached, reporting
    the final residual; for a genuine two-qubit witness that indicates a
    convergence failure rather than true infeasibility.
    """
    if w.dims.dims != (2, 2):
        raise DimensionMismatchError(f"decomposition requires dims (2, 2), got {w.dims.dims}")
    target = w.matrix
    dims = w.dims
    scale = 1.0 + float(np.linalg.norm(target))
    res_tol = DECOMP_RESIDUAL_RTOL * scale

    def affine_project(a, b):
        r = target - a - partial_transpose(b, dims, (2,))
        return a + r / 2.0, b + partial_transpose(r / 2.0, dims, (2,))

    a, b = target.copy(), np.zeros_like(target)
    pa = np.zeros_like(target)
    pb = np.zeros_like(target)
    residual = float(np.linalg.norm(target - a - partial_transpose(b, dims, (2,))))
    for it in range(1, DYKSTRA_MAX_ITER + 1):
        ya = _psd_projection(a + pa)
        yb = _psd_projection(b + pb)
        pa = a + pa - ya
        pb = b + pb - yb
        residual = float(np.linalg.norm(target - ya - partial_transpose(yb, dims, (2,))))
        a2, b2 = affine_project(ya, yb)
        step = float(np.sqrt(np.linalg.norm(a2 - a) ** 2 + np.linalg.norm(b2 - b) ** 2))
        a, b = a2, b2
        if step <= DYKSTRA_STEP_TOL:
            if residual <= res_tol:
                return ya, yb
            raise InfeasibleError(
                "alternating projections stalled before reaching the residual tolerance",
                residual,
                it,
            )
    raise InfeasibleError(
        "alternating projections hit the iteration cap", residual, DYKSTRA_MAX_ITER
    )


def lmpp_certified(m: LinearMapOp, tol: float = WITNESS_CERT_TOL) -> bool:
    """Whether the map carries a certificate of positivity on products."""
    return m.certificate is not None and m.certificate.value >= -tol


def warn_if_unverified(m: LinearMapOp, context: str) -> bool:
    if lmpp_certified(m):
        return True
    warnings.warn(
        f"{context}: map carries no positivity-on-products certificate; "
        "result is not certificate grade",
        UnverifiedMapWarning,
        stacklevel=3,
    )
    return False
