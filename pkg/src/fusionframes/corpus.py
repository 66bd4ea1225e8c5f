"""Bundled worked examples and their reproduction checks."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .frame import canonical_dual, excess, frame_operator
from .io import parse_frame, parse_scaling
from .linalg import DEFAULT_TOL, Tolerances, orthonormalize, subspace_relation
from .one_excess import decide_one_excess, partition_check, r2_closed_form
from .riesz import (
    ScalingPair,
    check_riesz_conditions,
    d_operator_check,
    verify_scaling,
)
from .search import objective, weight_only_solve

EXAMPLE_IDS = ("ex-2.7-1", "ex-2.7-2", "ex-2.9", "ex-3.4", "ex-3.5", "ex-3.6", "ex-r2")


@dataclass(frozen=True)
class Assertion:
    name: str
    passed: bool
    residual: float | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "residual": self.residual,
                "detail": self.detail}


def load(example_id: str) -> dict:
    if example_id not in EXAMPLE_IDS:
        raise KeyError(example_id)
    text = resources.files(__package__).joinpath("data").joinpath(f"{example_id}.json").read_text()
    return json.loads(text)


def load_frame(example_id: str, tol: Tolerances = DEFAULT_TOL):
    return parse_frame(load(example_id)["frame"], tol)[0]


def _equal_spans(name, actual, expected_rows, tol) -> Assertion:
    d = subspace_relation(actual, orthonormalize(expected_rows, tol), tol).distance
    return Assertion(name, d <= 1e-9, d)


def _flag(name, value, expected) -> Assertion:
    return Assertion(name, bool(value) == bool(expected), None, f"got {value}, expected {expected}")


def _excess(F, expected, tol) -> Assertion:
    e = excess(F, tol)
    return Assertion("excess", e == expected, None, f"excess {e}, expected {expected}")


def _scaling(doc, key, F):
    return parse_scaling(doc["scalings"][key], F.ambient_dim, len(F))


def _ex_2_7_1(doc, F, tol):
    exp = doc["expected"]
    out = [_excess(F, exp["excess"], tol)]
    sc = _scaling(doc, "example", F)
    rep = verify_scaling(F, sc, tol)
    out.append(Assertion("example U is Parseval", rep.is_parseval == exp["example_parseval"], rep.residual))
    out.append(_equal_spans("U W_1 = span{(1,0,0)}", F.mapped(sc.U, tol)[0].subspace,
                            exp["mapped_W1"], tol))
    conds = check_riesz_conditions(F, sc.U, tol)
    out.append(_flag("conditions i-iv all hold", conds.all_hold and conds.consistent, True))
    dchk = d_operator_check(F, sc, tol)
    out.append(Assertion("D-operator criterion holds", dchk.criterion_holds, dchk.residual))
    fam = _scaling(doc, "family_a_11001", F)
    rep = verify_scaling(F, fam, tol)
    out.append(Assertion("family member a=(1,1,0,0,1) is Parseval",
                         rep.is_parseval == exp["family_parseval"], rep.residual))
    ident = _scaling(doc, "identity", F)
    rep = verify_scaling(F, ident, tol)
    out.append(Assertion("identity is not Parseval", rep.is_parseval == exp["identity_parseval"],
                         rep.residual))
    K = np.array(doc["rotation"])
    rep = verify_scaling(F.mapped(K, tol), sc, tol)
    out.append(Assertion("rotated frame not scaled by the same U",
                         rep.is_parseval == exp["rotated_parseval"], rep.residual))
    return out


def _ex_2_7_2(doc, F, tol):
    exp = doc["expected"]
    sc = _scaling(doc, "example", F)
    rep = verify_scaling(F, sc, tol)
    conds = check_riesz_conditions(F, sc.U, tol)
    return [
        _excess(F, exp["excess"], tol),
        Assertion("block U is Parseval", rep.is_parseval == exp["example_parseval"], rep.residual),
        Assertion("U^T U W_i = W_i", conds["v"] == exp["gram_invariant"], conds.residuals["v"]),
        _flag("all conditions agree", conds.all_hold and conds.consistent, True),
    ]


def _ex_2_9(doc, F, tol):
    exp = doc["expected"]
    S = frame_operator(F)
    err = float(np.max(np.abs(S - np.array(exp["frame_operator"]))))
    dual = canonical_dual(F, tol)
    out = [Assertion("frame operator", err <= 1e-12, err)]
    for i, rows in enumerate(exp["dual"]):
        out.append(_equal_spans(f"dual subspace {i + 1}", dual[i].subspace, rows, tol))
    val = objective(F, ScalingPair(np.eye(3), [1, 1]), tol)
    out.append(Assertion("identity objective", abs(val - exp["identity_objective"]) <= 1e-12,
                         abs(val - exp["identity_objective"])))
    T = parse_scaling(doc["scalings"]["family_a_11001"]).U
    Tinv_t = np.linalg.inv(T.T)
    imgs = dual.mapped(Tinv_t, tol)
    ov = subspace_relation(imgs[0].subspace, imgs[1].subspace, tol).overlap
    out.append(Assertion("(T^T)^-1 separates the dual", ov <= 1e-9, ov))
    return out


def _structural(doc, F, tol):
    exp = doc["expected"]
    v = decide_one_excess(F, tol)
    return [
        _excess(F, exp["excess"], tol),
        Assertion("verdict", v.status == exp["status"] and v.reason == exp["reason"], None,
                  f"{v.status} ({v.reason})"),
    ]


def _ex_3_6(doc, F, tol):
    exp = doc["expected"]
    sc = _scaling(doc, "example", F)
    rep = verify_scaling(F, sc, tol)
    part = doc["partition"]
    cert = partition_check(F, sc, part["I1"], part["I2"], tol)
    ws = weight_only_solve(F, tol)
    out = [
        _excess(F, exp["excess"], tol),
        Assertion("example scaling is Parseval", rep.is_parseval == exp["example_parseval"], rep.residual),
        _flag("partition certificate", cert.holds, exp["certificate"]),
        _flag("certificate clauses agree", cert.clauses_agree, True),
        Assertion("not weight-scalable", ws.weight_scalable == exp["weight_scalable"], ws.residual),
    ]
    mapped = F.mapped(sc.U, tol)
    for i, rows in enumerate(exp["mapped"]):
        out.append(_equal_spans(f"U V_{i + 1}", mapped[i].subspace, rows, tol))
    return out


def _ex_r2(doc, F, tol):
    exp = doc["expected"]
    ang = doc["angles"]
    sc = r2_closed_form(ang["theta"], ang["psi"], tol)
    errU = float(np.max(np.abs(sc.U - np.array(exp["U"]))))
    errg = float(np.max(np.abs(sc.gammas - np.array(exp["gammas"]))))
    rep = verify_scaling(F, sc, tol)
    v = decide_one_excess(F, tol)
    ws = weight_only_solve(F, tol)
    return [
        Assertion("closed-form U", errU <= 1e-12, errU),
        Assertion("closed-form gammas", errg <= 1e-12, errg),
        Assertion("closed form is Parseval", rep.residual <= 1e-12, rep.residual),
        Assertion("verdict", v.status == exp["status"] and v.residual <= 1e-9, v.residual, v.reason),
        Assertion("no strictly positive weight scaling",
                  ws.strictly_scalable == exp["strictly_weight_scalable"], ws.residual,
                  f"dropped members {list(ws.dropped)}"),
    ]


_RUNNERS = {
    "ex-2.7-1": _ex_2_7_1,
    "ex-2.7-2": _ex_2_7_2,
    "ex-2.9": _ex_2_9,
    "ex-3.4": _structural,
    "ex-3.5": _structural,
    "ex-3.6": _ex_3_6,
    "ex-r2": _ex_r2,
}


def reproduce(example_id: str, tol: Tolerances = DEFAULT_TOL) -> list[Assertion]:
    doc = load(example_id)
    F, tol = parse_frame(doc["frame"], tol)
    return _RUNNERS[example_id](doc, F, tol)
