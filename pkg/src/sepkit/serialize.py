"""JSON document formats for states, operators, witnesses, maps and UPB sets.

Complex matrices travel as paired real arrays (``{"re": ..., "im": ...}``).
Numbers are written in Python's shortest round-tripping decimal form (at
most 17 significant digits), so ``parse(serialize(x))`` reproduces ``x``
bit-exactly. The ``dims`` field is authoritative; payload shapes are
validated against it on parse.
"""

from __future__ import annotations

import json
from typing import Any, Sequence

import numpy as np

from . import __version__
from ._backend import active_backend
from .errors import SerializationError
from .maps_witnesses import LinearMapOp, Witness
from .product_opt import OptResult
from .states import MultipartiteState, ProductVector, SeparableDecomposition
from .tensor_core import HilbertDims, as_dims
from .upb import UpbSet

KINDS = ("state", "operator", "witness", "map", "upb", "report")


def matrix_to_obj(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def obj_to_matrix(obj: Any, shape: tuple[int, int], what: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict) or "re" not in obj or "im" not in obj:
        raise SerializationError(f"{what} must be an object with 're' and 'im' arrays")
    try:
        re = np.array(obj["re"], dtype=np.float64)
        im = np.array(obj["im"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise SerializationError(f"{what} arrays are not numeric: {exc}") from exc
    if re.shape != shape or im.shape != shape:
        raise SerializationError(
            f"{what} shape {re.shape}/{im.shape} does not match dims-implied shape {shape}"
        )
    # assemble by field assignment: arithmetic would normalize signed zeros
    out = np.empty(shape, dtype=np.complex128)
    out.real = re
    out.imag = im
    return out


def vector_to_obj(v: np.ndarray) -> dict:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    return {"re": v.real.tolist(), "im": v.imag.tolist()}


def obj_to_vector(obj: Any, length: int | None = None, what: str = "vector") -> np.ndarray:
    if not isinstance(obj, dict) or "re" not in obj or "im" not in obj:
        raise SerializationError(f"{what} must be an object with 're' and 'im' arrays")
    re = np.array(obj["re"], dtype=np.float64).reshape(-1)
    im = np.array(obj["im"], dtype=np.float64).reshape(-1)
    if re.shape != im.shape:
        raise SerializationError(f"{what} re/im lengths differ")
    if length is not None and len(re) != length:
        raise SerializationError(f"{what} length {len(re)} does not match expected {length}")
    out = np.empty(re.shape, dtype=np.complex128)
    out.real = re
    out.imag = im
    return out


def base_meta(extra: dict | None = None) -> dict:
    meta = {"tool": "sepkit", "version": __version__, "backend": active_backend()}
    if extra:
        meta.update(extra)
    return meta


def document(kind: str, dims: Sequence[int] | None, payload: dict, meta: dict | None = None) -> dict:
    if kind not in KINDS:
        raise SerializationError(f"unknown document kind {kind!r}")
    return {
        "kind": kind,
        "dims": list(dims) if dims is not None else None,
        "payload": payload,
        "meta": base_meta(meta),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"invalid JSON document: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc or "payload" not in doc:
        raise SerializationError("document must be an object with 'kind' and 'payload'")
    if doc["kind"] not in KINDS:
        raise SerializationError(f"unknown document kind {doc['kind']!r}")
    return doc


def _require_kind(doc: dict, kind: str) -> None:
    if doc.get("kind") != kind:
        raise SerializationError(f"expected a {kind!r} document, got {doc.get('kind')!r}")


def _doc_dims(doc: dict) -> HilbertDims:
    dims = doc.get("dims")
    if not isinstance(dims, list) or not dims:
        raise SerializationError("document is missing its dims list")
    try:
        return as_dims([int(d) for d in dims])
    except Exception as exc:
        raise SerializationError(f"invalid dims {dims!r}: {exc}") from exc


# --- optimizer results and decompositions (meta blocks) ---------------------

def opt_result_to_obj(res: OptResult) -> dict:
    return {
        "value": float(res.value),
        "argopt": [vector_to_obj(v) for v in res.argopt.locals],
        "iterations": int(res.iterations),
        "restarts_used": int(res.restarts_used),
        "converged": bool(res.converged),
        "method": res.method,
        "cross_value": None if res.cross_value is None else float(res.cross_value),
    }


def obj_to_opt_result(obj: Any, dims: HilbertDims) -> OptResult:
    if not isinstance(obj, dict):
        raise SerializationError("certificate must be an object")
    locs = obj.get("argopt")
    if not isinstance(locs, list) or len(locs) != dims.n:
        raise SerializationError("certificate argopt does not match dims")
    pv = ProductVector(tuple(obj_to_vector(v, d, "argopt local") for v, d in zip(locs, dims.dims)))
    return OptResult(
        value=float(obj["value"]),
        argopt=pv,
        iterations=int(obj["iterations"]),
        restarts_used=int(obj["restarts_used"]),
        converged=bool(obj["converged"]),
        method=str(obj["method"]),
        cross_value=None if obj.get("cross_value") is None else float(obj["cross_value"]),
    )


def decomposition_to_obj(dec: SeparableDecomposition) -> dict:
    return {
        "weights": [float(w) for w in dec.weights],
        "terms": [[vector_to_obj(v) for v in t.locals] for t in dec.terms],
    }


def obj_to_decomposition(obj: Any, dims: HilbertDims) -> SeparableDecomposition:
    if not isinstance(obj, dict) or "weights" not in obj or "terms" not in obj:
        raise SerializationError("decomposition must carry 'weights' and 'terms'")
    terms = []
    for t in obj["terms"]:
        if not isinstance(t, list) or len(t) != dims.n:
            raise SerializationError("decomposition term does not match dims")
        terms.append(ProductVector(tuple(obj_to_vector(v, d, "term local") for v, d in zip(t, dims.dims))))
    return SeparableDecomposition(tuple(float(w) for w in obj["weights"]), tuple(terms))


# --- states ------------------------------------------------------------------

def state_to_document(state: MultipartiteState, meta: dict | None = None) -> dict:
    extra = dict(meta or {})
    if state.decomposition is not None:
        extra["decomposition"] = decomposition_to_obj(state.decomposition)
    return document("state", state.dims.dims, {"rho": matrix_to_obj(state.rho)}, extra)


def document_to_state(doc: dict) -> MultipartiteState:
    _require_kind(doc, "state")
    dims = _doc_dims(doc)
    rho = obj_to_matrix(doc["payload"].get("rho"), (dims.total, dims.total), "rho")
    dec_obj = (doc.get("meta") or {}).get("decomposition")
    dec = obj_to_decomposition(dec_obj, dims) if dec_obj is not None else None
    return MultipartiteState(dims, rho, decomposition=dec)


# --- bare operators ----------------------------------------------------------

def operator_to_document(matrix: np.ndarray, dims: HilbertDims | Sequence[int], meta: dict | None = None) -> dict:
    d = as_dims(dims)
    return document("operator", d.dims, {"matrix": matrix_to_obj(matrix)}, meta)


def document_to_operator(doc: dict) -> tuple[np.ndarray, HilbertDims]:
    _require_kind(doc, "operator")
    dims = _doc_dims(doc)
    return obj_to_matrix(doc["payload"].get("matrix"), (dims.total, dims.total), "matrix"), dims


# --- witnesses ---------------------------------------------------------------

def witness_to_document(w: Witness, meta: dict | None = None) -> dict:
    extra = dict(meta or {})
    if w.certificate is not None:
        extra["certificate"] = opt_result_to_obj(w.certificate)
    return document("witness", w.dims.dims, {"matrix": matrix_to_obj(w.matrix)}, extra)


def document_to_witness(doc: dict) -> Witness:
    _require_kind(doc, "witness")
    dims = _doc_dims(doc)
    mat = obj_to_matrix(doc["payload"].get("matrix"), (dims.total, dims.total), "matrix")
    cert_obj = (doc.get("meta") or {}).get("certificate")
    cert = obj_to_opt_result(cert_obj, dims) if cert_obj is not None else None
    return Witness(dims=dims, matrix=mat, certificate=cert)


# --- maps --------------------------------------------------------------------

def map_to_document(m: LinearMapOp, meta: dict | None = None) -> dict:
    extra = dict(meta or {})
    extra["out_dims"] = list(m.out_dims.dims)
    extra["in_dims"] = list(m.in_dims.dims)
    if m.certificate is not None:
        extra["certificate"] = opt_result_to_obj(m.certificate)
    return document("map", m.full_dims.dims, {"choi": matrix_to_obj(m.choi)}, extra)


def document_to_map(doc: dict) -> LinearMapOp:
    _require_kind(doc, "map")
    dims = _doc_dims(doc)
    meta = doc.get("meta") or {}
    out_dims = meta.get("out_dims")
    in_dims = meta.get("in_dims")
    if not out_dims or not in_dims:
        raise SerializationError("map document must carry meta.out_dims and meta.in_dims")
    outd = as_dims([int(d) for d in out_dims])
    ind = as_dims([int(d) for d in in_dims])
    if outd.dims + ind.dims != dims.dims:
        raise SerializationError("map dims must equal out_dims + in_dims")
    choi = obj_to_matrix(doc["payload"].get("choi"), (dims.total, dims.total), "choi")
    cert_obj = meta.get("certificate")
    cert = obj_to_opt_result(cert_obj, dims) if cert_obj is not None else None
    return LinearMapOp(in_dims=ind, out_dims=outd, choi=choi, certificate=cert)


# --- UPB sets ----------------------------------------------------------------

def upb_to_document(u: UpbSet, meta: dict | None = None) -> dict:
    extra = dict(meta or {})
    if u.epsilon is not None:
        extra["epsilon"] = float(u.epsilon)
    if u.certificate is not None:
        extra["certificate"] = opt_result_to_obj(u.certificate)
    members = [[vector_to_obj(v) for v in pv.locals] for pv in u.members]
    return document("upb", u.dims.dims, {"members": members}, extra)


def document_to_upb(doc: dict) -> UpbSet:
    _require_kind(doc, "upb")
    dims = _doc_dims(doc)
    raw = doc["payload"].get("members")
    if not isinstance(raw, list) or not raw:
        raise SerializationError("upb document must carry a nonempty members list")
    members = []
    for k, entry in enumerate(raw, start=1):
        if not isinstance(entry, list) or len(entry) != dims.n:
            raise SerializationError(f"member {k} does not list one vector per subsystem")
        members.append(
            ProductVector(tuple(obj_to_vector(v, d, f"member {k}") for v, d in zip(entry, dims.dims)))
        )
    meta = doc.get("meta") or {}
    eps = meta.get("epsilon")
    cert_obj = meta.get("certificate")
    cert = obj_to_opt_result(cert_obj, dims) if cert_obj is not None else None
    return UpbSet(
        dims=dims,
        members=tuple(members),
        epsilon=None if eps is None else float(eps),
        certificate=cert,
    )


# --- reports -----------------------------------------------------------------

def report_document(command: str, payload: dict, dims: Sequence[int] | None = None, meta: dict | None = None) -> dict:
    body = {"command": command}
    body.update(payload)
    return document("report", dims, body, meta)
