"""Command-line front end.

Exit codes: 0 success / Parseval, 1 failed reproduction, 2 invalid input,
3 not a fusion frame, 4 not scalable / not Parseval, 5 undecided,
6 mode does not fit the frame.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import corpus
from .errors import FusionFrameError, NoLineRemovable, NotAFrame, WrongExcess
from .frame import canonical_dual, classify
from .io import InvalidDocument, dumps, frame_to_doc, parse_frame, parse_scaling, read_json
from .linalg import DEFAULT_TOL
from .one_excess import (
    canonicalize_r2,
    decide_one_excess,
    decompose_one_excess,
    full_scaling,
    necessary_conditions,
    r2_closed_form,
    scaling_identity_residual,
)
from .riesz import check_riesz_conditions, construct_riesz_scaler, d_operator_check, verify_scaling
from .search import SearchOptions, search_operator_scaling, weight_only_solve

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_NOT_FRAME = 0, 1, 2, 3
EXIT_NOT_SCALABLE, EXIT_UNDECIDED, EXIT_MODE = 4, 5, 6

VERDICT_EXIT = {"Scalable": EXIT_OK, "NotScalable": EXIT_NOT_SCALABLE, "Undecided": EXIT_UNDECIDED}


class ModeMismatch(Exception):
    pass


def _flag_tol(args):
    return {"op_rel": args.op_rel, "rank_rel": args.rank_rel, "cond_max": args.cond_max}


def _load_frame(args, path):
    F, tol = parse_frame(read_json(path))
    try:
        tol = tol.with_overrides(**_flag_tol(args))
    except ValueError as exc:
        raise InvalidDocument(str(exc)) from None
    return F, tol


def _emit(args, obj):
    print(dumps(obj, indent=args.json_indent if args.json_indent > 0 else None))


def cmd_analyze(args) -> int:
    F, tol = _load_frame(args, args.frame)
    a = classify(F, tol)
    report = a.to_dict()
    if not a.is_frame:
        _emit(args, report)
        return EXIT_NOT_FRAME
    report["canonical_dual"] = frame_to_doc(canonical_dual(F, tol))
    _emit(args, report)
    return EXIT_OK


def _one_excess_checks(F, sc, tol):
    try:
        D = decompose_one_excess(F, tol)
    except (WrongExcess, NoLineRemovable):
        return None, None
    out = {"decomposition": D.to_dict()}
    out["necessary_conditions"] = necessary_conditions(D, sc, tol).to_dict()
    out["identity_residual"] = scaling_identity_residual(D, sc, tol).to_dict()
    return D, out


def cmd_check(args) -> int:
    F, tol = _load_frame(args, args.frame)
    sc = parse_scaling(read_json(args.scaling), F.ambient_dim, len(F))
    a = classify(F, tol)
    if not a.is_frame:
        _emit(args, {"analysis": a.to_dict()})
        return EXIT_NOT_FRAME
    report = {}
    one_excess = None
    if sc.gammas.size != len(F):
        # gamma0 form: needs the V0 u W split to place gamma0
        try:
            D = decompose_one_excess(F, tol)
        except (WrongExcess, NoLineRemovable) as exc:
            raise InvalidDocument(f"gamma0 form needs a decomposable 1-excess frame: {exc}") from None
        sc = full_scaling(D, sc)
    if a.excess == 1:
        _, one_excess = _one_excess_checks(F, sc, tol)
    rep = verify_scaling(F, sc, tol)
    report["scaling"] = {k: v for k, v in rep.to_dict().items() if k != "scaled_operator"}
    report["scaled_operator"] = rep.scaled_operator.tolist()
    report["d_operator"] = {k: v for k, v in d_operator_check(F, sc, tol).__dict__.items()
                            if k not in ("lhs", "rhs")}
    if a.is_riesz_basis and np.allclose(sc.gammas * F.weights, 1.0):
        report["riesz_conditions"] = check_riesz_conditions(F, sc.U, tol).to_dict()
    if one_excess is not None:
        report["one_excess"] = one_excess
    _emit(args, report)
    return EXIT_OK if rep.is_parseval else EXIT_NOT_SCALABLE


def _scale_riesz(F, tol, args):
    if not classify(F, tol).is_riesz_basis:
        raise ModeMismatch("mode riesz needs a fusion Riesz basis (excess 0)")
    sc = construct_riesz_scaler(F, args.method, tol)
    return "Scalable", f"riesz-{args.method}", sc, {}


def _scale_lines_r2(F, tol, args):
    if F.ambient_dim != 2 or len(F) != 3 or any(r != 1 for r in F.ranks):
        raise ModeMismatch("mode lines-r2 needs exactly three lines in R^2")
    canon = canonicalize_r2(F, tol)
    sc = canon.pull_back(r2_closed_form(canon.theta, canon.psi, tol))
    details = {"theta": canon.theta, "psi": canon.psi, "permutation": list(canon.permutation),
               "R": canon.R.tolist()}
    return "Scalable", "closed-form", sc, details


def _options(args, structural=None):
    return SearchOptions(restarts=args.restarts, max_iters=args.iters, seed=args.seed,
                         structural=args.structural if structural is None else structural)


def _scale_one_excess(F, tol, args):
    if classify(F, tol).excess != 1:
        raise ModeMismatch("mode one-excess needs a frame of excess 1")
    v = decide_one_excess(F, tol, _options(args, structural=True))
    return v.status, v.reason, v.scaling, v.details


def _scale_search(F, tol, args):
    r = search_operator_scaling(F, _options(args), tol)
    status = "Scalable" if r.converged else "Undecided"
    reason = "search-converged" if r.converged else "search-budget-exhausted"
    details = {"evaluations": r.evaluations, "seed": r.seed, "restart_index": r.restart_index}
    if r.partition is not None:
        details["partition"] = [list(p) for p in r.partition]
    return status, reason, r.best, details


_MODES = {"riesz": _scale_riesz, "lines-r2": _scale_lines_r2,
          "one-excess": _scale_one_excess, "search": _scale_search}


def cmd_scale(args) -> int:
    F, tol = _load_frame(args, args.frame)
    if not classify(F, tol).is_frame:
        print("error: the subspaces do not span the ambient space", file=sys.stderr)
        return EXIT_NOT_FRAME
    try:
        status, reason, sc, details = _MODES[args.mode](F, tol, args)
    except ModeMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODE
    out = {"verdict": {"status": status, "reason": reason}}
    if sc is not None:
        rep = verify_scaling(F, sc, tol)
        out.update(sc.to_dict())
        out["verdict"]["residual"] = rep.residual
    out["details"] = details
    _emit(args, out)
    return VERDICT_EXIT[status]


def cmd_dual(args) -> int:
    F, tol = _load_frame(args, args.frame)
    try:
        dual = canonical_dual(F, tol)
    except NotAFrame as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_FRAME
    _emit(args, frame_to_doc(dual))
    return EXIT_OK


def cmd_weights(args) -> int:
    F, tol = _load_frame(args, args.frame)
    r = weight_only_solve(F, tol)
    _emit(args, r.to_dict())
    return EXIT_OK if r.strictly_scalable else EXIT_NOT_SCALABLE


def cmd_reproduce(args) -> int:
    if args.example_id not in corpus.EXAMPLE_IDS:
        print(f"error: unknown example id {args.example_id!r}; known: "
              f"{', '.join(corpus.EXAMPLE_IDS)}", file=sys.stderr)
        return EXIT_INVALID
    tol = DEFAULT_TOL.with_overrides(**_flag_tol(args))
    results = corpus.reproduce(args.example_id, tol)
    passed = all(a.passed for a in results)
    _emit(args, {"id": args.example_id, "passed": passed,
                 "assertions": [a.to_dict() for a in results]})
    for a in results:
        res = "" if a.residual is None else f" residual={a.residual:.3e}"
        print(f"{'PASS' if a.passed else 'FAIL'} {a.name}{res}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fusionframes",
                                description="Analyse and scale finite fusion frames.")
    p.add_argument("--op-rel", type=float, help="operator equality tolerance")
    p.add_argument("--rank-rel", type=float, help="relative rank threshold")
    p.add_argument("--cond-max", type=float, help="largest admissible condition number")
    p.add_argument("--json-indent", type=int, default=2, help="indent of JSON output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", help="bounds, excess, flags and canonical dual")
    s.add_argument("frame")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("check", help="verify a candidate scaling")
    s.add_argument("frame")
    s.add_argument("scaling")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("scale", help="construct or search for a scaling")
    s.add_argument("frame")
    s.add_argument("--mode", choices=sorted(_MODES), required=True)
    s.add_argument("--method", choices=["spd-inverse-sqrt", "synthesis-inverse"],
                   default="spd-inverse-sqrt", help="scaler for --mode riesz")
    s.add_argument("--restarts", type=int, default=16)
    s.add_argument("--iters", type=int, default=500)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--structural", action="store_true",
                   help="try line/Riesz splits first (1-excess frames)")
    s.set_defaults(func=cmd_scale)

    s = sub.add_parser("dual", help="canonical dual frame document")
    s.add_argument("frame")
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("weights", help="best scaling by weights alone")
    s.add_argument("frame")
    s.set_defaults(func=cmd_weights)

    s = sub.add_parser("reproduce", help="rerun a bundled worked example")
    s.add_argument("example_id")
    s.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidDocument, FusionFrameError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
