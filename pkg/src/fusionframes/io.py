"""JSON documents for frames and scalings.

A frame document looks like::

    {"ambient_dim": 3,
     "subspaces": [{"weight": 1.0, "basis": [[1, 1, 0]]}, ...],
     "tolerances": {"op_rel": 1e-9}}

Rows of ``basis`` span the subspace; ``weight`` defaults to 1. A scaling
document holds ``U`` (row-major), ``gammas`` and optionally ``gamma0``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import FusionFrameError
from .frame import FusionFrame
from .linalg import DEFAULT_TOL, Tolerances
from .riesz import ScalingPair

_TOL_KEYS = ("op_rel", "rank_rel", "cond_max")


class InvalidDocument(FusionFrameError, ValueError):
    pass


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidDocument(f"{where}: expected a number, got {value!r}")
    if not np.isfinite(value):
        raise InvalidDocument(f"{where}: non-finite number")
    return float(value)


def _matrix(value, where: str, cols: int | None = None) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise InvalidDocument(f"{where}: expected a non-empty list of rows")
    rows = []
    for r, row in enumerate(value):
        if not isinstance(row, list):
            raise InvalidDocument(f"{where}[{r}]: expected a list of numbers")
        rows.append([_number(v, f"{where}[{r}]") for v in row])
    width = len(rows[0]) if cols is None else cols
    if any(len(row) != width for row in rows):
        raise InvalidDocument(f"{where}: every row must have length {width}")
    return np.array(rows, dtype=float)


def read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidDocument(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidDocument(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(doc, dict):
        raise InvalidDocument(f"{path}: top level must be an object")
    return doc


def parse_tolerances(doc: dict | None, base: Tolerances = DEFAULT_TOL) -> Tolerances:
    if not doc:
        return base
    if not isinstance(doc, dict):
        raise InvalidDocument("tolerances must be an object")
    unknown = set(doc) - set(_TOL_KEYS)
    if unknown:
        raise InvalidDocument(f"unknown tolerance keys: {sorted(unknown)}")
    try:
        return base.with_overrides(**{k: _number(v, k) for k, v in doc.items()})
    except ValueError as exc:
        raise InvalidDocument(str(exc)) from None


def parse_frame(doc: dict, tol: Tolerances | None = None) -> tuple[FusionFrame, Tolerances]:
    """FusionFrame and the tolerances it requests (file values over ``tol``)."""
    if not isinstance(doc, dict):
        raise InvalidDocument("frame document must be an object")
    n = doc.get("ambient_dim")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidDocument("ambient_dim must be a positive integer")
    subs = doc.get("subspaces")
    if not isinstance(subs, list) or not subs:
        raise InvalidDocument("subspaces must be a non-empty list")
    tol = parse_tolerances(doc.get("tolerances"), tol or DEFAULT_TOL)
    spans, weights = [], []
    for i, s in enumerate(subs):
        if not isinstance(s, dict) or "basis" not in s:
            raise InvalidDocument(f"subspaces[{i}] must be an object with a basis")
        spans.append(list(_matrix(s["basis"], f"subspaces[{i}].basis", cols=n)))
        w = _number(s.get("weight", 1.0), f"subspaces[{i}].weight")
        if w <= 0:
            raise InvalidDocument(f"subspaces[{i}].weight must be positive")
        weights.append(w)
    try:
        return FusionFrame.from_spans(spans, weights, tol), tol
    except FusionFrameError as exc:
        raise InvalidDocument(str(exc)) from None


def parse_scaling(doc: dict, n: int | None = None, m: int | None = None) -> ScalingPair:
    """ScalingPair from a document; checks U is n x n and the gamma count."""
    if not isinstance(doc, dict):
        raise InvalidDocument("scaling document must be an object")
    if "U" not in doc or "gammas" not in doc:
        raise InvalidDocument("scaling document needs U and gammas")
    U = _matrix(doc["U"], "U")
    if U.shape[0] != U.shape[1]:
        raise InvalidDocument(f"U must be square, got {U.shape[0]}x{U.shape[1]}")
    if n is not None and U.shape[0] != n:
        raise InvalidDocument(f"U is {U.shape[0]}x{U.shape[0]} but the frame lives in R^{n}")
    g = doc["gammas"]
    if not isinstance(g, list) or not g:
        raise InvalidDocument("gammas must be a non-empty list")
    gammas = [_number(v, "gammas") for v in g]
    g0 = doc.get("gamma0")
    g0 = None if g0 is None else _number(g0, "gamma0")
    if m is not None:
        ok = len(gammas) == m or (g0 is not None and len(gammas) == m - 1)
        if not ok:
            raise InvalidDocument(f"{len(gammas)} gammas do not fit {m} subspaces")
    try:
        return ScalingPair(U, gammas, g0)
    except ValueError as exc:
        raise InvalidDocument(str(exc)) from None


def frame_to_doc(F: FusionFrame, tol: Tolerances | None = None) -> dict:
    doc = {
        "ambient_dim": F.ambient_dim,
        "subspaces": [{"weight": m.weight, "basis": m.subspace.basis.T.tolist()}
                      for m in F.members],
    }
    if tol is not None and tol != DEFAULT_TOL:
        doc["tolerances"] = {k: getattr(tol, k) for k in _TOL_KEYS}
    return doc


def scaling_to_doc(sc: ScalingPair) -> dict:
    return sc.to_dict()


def dumps(obj, indent: int | None = 2) -> str:
    return json.dumps(obj, indent=indent, default=_default)


def _default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, (tuple, set)):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")
