"""Command-line interface.

Commands read and write the JSON documents defined in ``serialize``; report
commands print JSON to stdout (or an aligned text table with ``--human``).
Exit codes: 0 success, 1 input or validation error, 2 internal convergence
failure. ``SEPKIT_SEED`` provides the default seed.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

import numpy as np

from . import __version__, serialize
from .criteria import CutReport, decide, ppt_check, semisep_report
from .errors import (
    BadSubsetError,
    ConvergenceFailureError,
    InfeasibleError,
    OutOfRangeError,
    SepkitError,
    UnknownNameError,
)
from .maps_witnesses import (
    Witness,
    apply_map,
    applied_dims,
    eval_witness,
    map_from_witness,
)
from .product_opt import OptBudget, certify, grid_extremize, seesaw_extremize
from .states import (
    density_from_pure,
    max_entangled_vector,
    maximally_mixed,
    random_separable,
    singlet_vector,
    werner_state,
)
from .tensor_core import HilbertDims, as_dims
from .upb import build_witness, builtin_upb, verify_upb


def _default_seed() -> int:
    raw = os.environ.get("SEPKIT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise OutOfRangeError(f"SEPKIT_SEED must be an integer, got {raw!r}")


def _parse_dims(text: str) -> HilbertDims:
    try:
        return as_dims([int(x) for x in text.split(",") if x.strip()])
    except SepkitError:
        raise
    except ValueError:
        raise OutOfRangeError(f"invalid dims list {text!r}; expected e.g. '2,2,2'")


def _parse_cut(args, n: int) -> tuple[int, ...]:
    if args.cut_set:
        subset = tuple(int(x) for x in args.cut_set.split(",") if x.strip())
        return subset
    if not args.cut:
        raise BadSubsetError("provide --cut like '1|23' or --cut-set like '1,3'")
    text = args.cut
    if "|" not in text:
        raise BadSubsetError(f"cut {text!r} must look like '1|23' (subset|complement)")
    left, right = text.split("|", 1)
    subset = tuple(int(c) for c in left.strip())
    complement = tuple(int(c) for c in right.strip())
    if sorted(subset + complement) != list(range(1, n + 1)):
        raise BadSubsetError(
            f"cut {text!r} must partition 1..{n} between subset and complement"
        )
    return subset


def _read_document(path: str | None) -> dict:
    if path in (None, "-"):
        return serialize.loads(sys.stdin.read())
    with open(path, "r", encoding="utf-8") as fh:
        return serialize.loads(fh.read())


def _write_document(doc: dict, path: str | None) -> None:
    text = serialize.dumps(doc)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _human_lines(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(obj, dict):
        width = max((len(str(k)) for k in obj), default=0)
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.extend(_human_lines(v, indent + 1))
            else:
                lines.append(f"{pad}{str(k).ljust(width)}  {v!r}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}[{i}]")
                lines.extend(_human_lines(v, indent + 1))
            else:
                lines.append(f"{pad}[{i}]  {v!r}")
    else:
        lines.append(f"{pad}{obj!r}")
    return lines


def _emit_report(doc: dict, human: bool) -> None:
    if human:
        print("\n".join(_human_lines(doc["payload"])))
    else:
        sys.stdout.write(serialize.dumps(doc))


def _cut_obj(rep: CutReport) -> dict:
    return {
        "subset": list(rep.subset),
        "complement": list(rep.complement),
        "min_eig_pt": rep.min_eig_pt,
        "passes": rep.passes,
    }


def _budget_from(args) -> OptBudget:
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = _default_seed()
    return OptBudget(
        restarts=getattr(args, "restarts", 64),
        grid_points=getattr(args, "grid", 16),
        refine_levels=getattr(args, "refine", 3),
        seed=seed,
    )


# --- command handlers --------------------------------------------------------

def _cmd_state_make(args) -> int:
    name = args.name
    if name == "werner":
        if args.p is None:
            raise OutOfRangeError("state make --name werner requires --p")
        state = werner_state(args.p)
        meta = {"name": name, "p": float(args.p)}
    elif name == "pplus":
        dims = _parse_dims(args.dims) if args.dims else as_dims((2, 2))
        if dims.n != 2 or dims.dims[0] != dims.dims[1]:
            raise OutOfRangeError("pplus needs two equal local dimensions, e.g. --dims 2,2")
        state = density_from_pure(max_entangled_vector(dims.dims[0]), dims)
        meta = {"name": name}
    elif name == "singlet":
        state = density_from_pure(singlet_vector(), (2, 2))
        meta = {"name": name}
    elif name == "maxmixed":
        dims = _parse_dims(args.dims) if args.dims else as_dims((2, 2))
        state = maximally_mixed(dims)
        meta = {"name": name}
    else:
        raise UnknownNameError(f"unknown state name {name!r}")
    _write_document(serialize.state_to_document(state, meta), args.output)
    return 0


def _cmd_state_random_separable(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    dims = _parse_dims(args.dims)
    state = random_separable(dims, args.k, seed=seed)
    _write_document(serialize.state_to_document(state, {"seed": seed, "k": args.k}), args.output)
    return 0


def _cmd_ppt(args) -> int:
    state = serialize.document_to_state(_read_document(args.state))
    subset = _parse_cut(args, state.dims.n)
    rep = ppt_check(state, subset)
    payload = {
        "cut": {"subset": list(rep.subset), "complement": list(rep.complement)},
        "min_eig_pt": rep.min_eig_pt,
        "passes": rep.passes,
    }
    doc = serialize.report_document("ppt", payload, state.dims.dims)
    _emit_report(doc, args.human)
    return 0


def _cmd_semisep(args) -> int:
    state = serialize.document_to_state(_read_document(args.state))
    reps = semisep_report(state)
    doc = serialize.report_document(
        "semisep",
        {"cuts": [_cut_obj(r) for r in reps], "all_pass": all(r.passes for r in reps)},
        state.dims.dims,
    )
    _emit_report(doc, args.human)
    return 0


def _cmd_upb_builtin(args) -> int:
    u = builtin_upb(args.name)
    _write_document(serialize.upb_to_document(u, {"name": args.name}), args.output)
    return 0


def _cmd_upb_verify(args) -> int:
    u = serialize.document_to_upb(_read_document(args.upb))
    verified = verify_upb(u, _budget_from(args))
    _write_document(serialize.upb_to_document(verified), args.output)
    return 0


def _cmd_witness_build(args) -> int:
    u = serialize.document_to_upb(_read_document(args.upb))
    budget = _budget_from(args)
    if u.epsilon is None:
        u = verify_upb(u, budget)
    choice = args.probe
    if choice == "identity":
        probe = None
    elif choice.startswith("file:"):
        probe, pdims = serialize.document_to_operator(_read_document(choice[5:]))
        if pdims != u.dims:
            raise OutOfRangeError(
                f"probe dims {pdims.dims} do not match UPB dims {u.dims.dims}"
            )
    else:
        raise UnknownNameError(f"--C must be 'identity' or 'file:PATH', got {choice!r}")
    w = build_witness(u, probe, budget)
    _write_document(serialize.witness_to_document(w), args.output)
    return 0


def _cmd_witness_eval(args) -> int:
    w = serialize.document_to_witness(_read_document(args.witness))
    state = serialize.document_to_state(_read_document(args.state))
    val = eval_witness(w, state)
    doc = serialize.report_document(
        "witness-eval",
        {"value": val, "detects": val < -1e-7, "witness_certified": w.certified},
        state.dims.dims,
    )
    _emit_report(doc, args.human)
    return 0


def _cmd_map_from_witness(args) -> int:
    w = serialize.document_to_witness(_read_document(args.witness))
    _write_document(serialize.map_to_document(map_from_witness(w)), args.output)
    return 0


def _cmd_map_apply(args) -> int:
    m = serialize.document_to_map(_read_document(args.map))
    state = serialize.document_to_state(_read_document(args.state))
    on = tuple(int(x) for x in args.on.split(",") if x.strip())
    out = apply_map(m, state, on)
    dims = applied_dims(m, state, on)
    min_eig = float(np.linalg.eigvalsh(out)[0])
    doc = serialize.operator_to_document(out, dims, {"min_eig": min_eig, "on": list(on)})
    _write_document(doc, args.output)
    return 0


def _cmd_decide(args) -> int:
    state = serialize.document_to_state(_read_document(args.state))
    catalog: list[tuple[str, Witness]] = []
    if args.catalog:
        for fname in sorted(os.listdir(args.catalog)):
            if not fname.endswith(".json"):
                continue
            path = os.path.join(args.catalog, fname)
            with open(path, "r", encoding="utf-8") as fh:
                doc = serialize.loads(fh.read())
            if doc.get("kind") != "witness":
                continue
            catalog.append((fname, serialize.document_to_witness(doc)))
    verdict = decide(state, catalog)
    payload = {
        "status": verdict.status,
        "witness_name": verdict.witness_name,
        "witness_value": verdict.witness_value,
        "failing_cut": _cut_obj(verdict.failing_cut) if verdict.failing_cut else None,
        "has_decomposition": verdict.decomposition is not None,
        "exactness": verdict.exactness,
    }
    _emit_report(serialize.report_document("decide", payload, state.dims.dims), args.human)
    return 0


def _cmd_optimize(args) -> int:
    op, dims = serialize.document_to_operator(_read_document(args.op))
    seed = args.seed if args.seed is not None else _default_seed()
    if args.method == "seesaw":
        res = seesaw_extremize(op, dims, args.direction, restarts=args.restarts, seed=seed)
    elif args.method == "grid":
        res = grid_extremize(op, dims, args.direction, grid_points=args.grid, refine_levels=args.refine)
    else:
        budget = OptBudget(restarts=args.restarts, grid_points=args.grid, refine_levels=args.refine, seed=seed)
        res = certify(op, dims, args.direction, budget)
    payload = {"direction": args.direction, "result": serialize.opt_result_to_obj(res)}
    _emit_report(serialize.report_document("optimize", payload, dims.dims, {"seed": seed}), args.human)
    return 0


# --- parser ------------------------------------------------------------------

def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=int, default=64, help="seesaw restarts")
    p.add_argument("--grid", type=int, default=16, help="grid points per Bloch angle")
    p.add_argument("--refine", type=int, default=3, help="grid refinement levels")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: SEPKIT_SEED or 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sepkit",
        description="Separability tests, entanglement witnesses and product-state optimization "
        "for small multipartite quantum states.",
    )
    parser.add_argument("--version", action="version", version=f"sepkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_state = sub.add_parser("state", help="construct states")
    state_sub = p_state.add_subparsers(dest="state_command", required=True)

    p_make = state_sub.add_parser("make", help="named states")
    p_make.add_argument("--name", required=True, choices=["werner", "pplus", "singlet", "maxmixed"])
    p_make.add_argument("--p", type=float, default=None, help="werner mixing parameter in [0,1]")
    p_make.add_argument("--dims", default=None, help="local dimensions, e.g. 2,2,2")
    p_make.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    p_make.set_defaults(func=_cmd_state_make)

    p_rand = state_sub.add_parser("random-separable", help="random separable mixture")
    p_rand.add_argument("--dims", required=True)
    p_rand.add_argument("--k", type=int, required=True, help="number of product terms")
    p_rand.add_argument("--seed", type=int, default=None)
    p_rand.add_argument("-o", "--output", default=None)
    p_rand.set_defaults(func=_cmd_state_random_separable)

    p_ppt = sub.add_parser("ppt", help="partial-transpose test over one cut")
    p_ppt.add_argument("state", nargs="?", default=None, help="state document (default stdin)")
    p_ppt.add_argument("--cut", default=None, help="cut like '1|23' (subset|complement)")
    p_ppt.add_argument("--cut-set", default=None, help="subset as comma list, e.g. '1,3'")
    p_ppt.add_argument("--human", action="store_true")
    p_ppt.set_defaults(func=_cmd_ppt)

    p_semi = sub.add_parser("semisep", help="every one-vs-rest cut")
    p_semi.add_argument("state", nargs="?", default=None)
    p_semi.add_argument("--human", action="store_true")
    p_semi.set_defaults(func=_cmd_semisep)

    p_upb = sub.add_parser("upb", help="unextendible product bases")
    upb_sub = p_upb.add_subparsers(dest="upb_command", required=True)

    p_ub = upb_sub.add_parser("builtin", help="built-in sets")
    p_ub.add_argument("--name", required=True)
    p_ub.add_argument("-o", "--output", default=None)
    p_ub.set_defaults(func=_cmd_upb_builtin)

    p_uv = upb_sub.add_parser("verify", help="certify unextendibility")
    p_uv.add_argument("upb", nargs="?", default=None)
    p_uv.add_argument("-o", "--output", default=None)
    _add_budget_flags(p_uv)
    p_uv.set_defaults(func=_cmd_upb_verify)

    p_wit = sub.add_parser("witness", help="entanglement witnesses")
    wit_sub = p_wit.add_subparsers(dest="witness_command", required=True)

    p_wb = wit_sub.add_parser("build", help="witness from a verified UPB")
    p_wb.add_argument("--upb", required=True)
    p_wb.add_argument("--C", dest="probe", default="identity", help="'identity' or 'file:PATH'")
    p_wb.add_argument("-o", "--output", default=None)
    _add_budget_flags(p_wb)
    p_wb.set_defaults(func=_cmd_witness_build)

    p_we = wit_sub.add_parser("eval", help="mean value on a state")
    p_we.add_argument("witness")
    p_we.add_argument("state", nargs="?", default=None)
    p_we.add_argument("--human", action="store_true")
    p_we.set_defaults(func=_cmd_witness_eval)

    p_map = sub.add_parser("map", help="linear maps")
    map_sub = p_map.add_subparsers(dest="map_command", required=True)

    p_mf = map_sub.add_parser("from-witness", help="map carried by a witness")
    p_mf.add_argument("witness", nargs="?", default=None)
    p_mf.add_argument("-o", "--output", default=None)
    p_mf.set_defaults(func=_cmd_map_from_witness)

    p_ma = map_sub.add_parser("apply", help="apply a map to part of a state")
    p_ma.add_argument("map")
    p_ma.add_argument("state", nargs="?", default=None)
    p_ma.add_argument("--on", required=True, help="subsystems the map consumes, e.g. '2,3'")
    p_ma.add_argument("-o", "--output", default=None)
    p_ma.set_defaults(func=_cmd_map_apply)

    p_dec = sub.add_parser("decide", help="three-valued separability verdict")
    p_dec.add_argument("state", nargs="?", default=None)
    p_dec.add_argument("--catalog", default=None, help="directory of witness documents")
    p_dec.add_argument("--human", action="store_true")
    p_dec.set_defaults(func=_cmd_decide)

    p_opt = sub.add_parser("optimize", help="extremize an operator over product states")
    p_opt.add_argument("--op", required=True, help="operator document")
    p_opt.add_argument("--direction", required=True, choices=["min", "max"])
    p_opt.add_argument("--method", default="seesaw", choices=["seesaw", "grid", "certify"])
    p_opt.add_argument("--human", action="store_true")
    _add_budget_flags(p_opt)
    p_opt.set_defaults(func=_cmd_optimize)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args, extras = parser.parse_known_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; those are input errors here
        return 0 if exc.code == 0 else 1
    if extras:
        # argparse cannot match a positional that follows an option once an
        # earlier positional was consumed (e.g. `map apply m.json --on 2,3
        # f.json`); route a single trailing file into the open state slot
        if len(extras) == 1 and getattr(args, "state", "") is None:
            args.state = extras[0]
        else:
            print(f"error: unrecognized arguments: {' '.join(extras)}", file=sys.stderr)
            return 1
    try:
        return args.func(args)
    except (ConvergenceFailureError, InfeasibleError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except SepkitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
