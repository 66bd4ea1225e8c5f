"""One check per acceptance criterion, each printing a PASS/FAIL line."""

import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from fusionframes import corpus
from fusionframes.frame import canonical_dual, frame_operator
from fusionframes.io import parse_scaling
from fusionframes.linalg import orthonormalize, subspace_relation
from fusionframes.one_excess import decide_one_excess, partition_check, r2_closed_form
from fusionframes.riesz import (
    ScalingPair,
    check_riesz_conditions,
    construct_riesz_scaler,
    d_operator_check,
    verify_scaling,
)
from fusionframes.sampling import (
    line_frame,
    random_admissible_angles,
    random_invertible,
    random_orthogonal,
    random_riesz_basis,
    random_weights,
)
from fusionframes.search import weight_only_solve

from conftest import SQ2, lines_r2

SEED = 20240611
TESTS = Path(__file__).parent


def test_criterion_01_frame_operator(criterion):
    F = corpus.load_frame("ex-2.9")
    expected = 0.5 * np.array([[1, 1, 0], [1, 3, 0], [0, 0, 2]])
    frame_operator(F)
    times = []
    for _ in range(20):
        t0 = time.perf_counter()
        S = frame_operator(F)
        times.append(time.perf_counter() - t0)
    err = float(np.max(np.abs(S - expected)))
    best = min(times)
    criterion(1, "frame operator of ex-2.9", err <= 1e-12 and best < 1e-3,
              f"max error {err:.1e}, runtime {best * 1e6:.0f} us")


def test_criterion_02_canonical_dual(criterion):
    dual = canonical_dual(corpus.load_frame("ex-2.9"))
    d1 = subspace_relation(dual[0].subspace, orthonormalize([[1, 0, 0]])).distance
    d2 = subspace_relation(dual[1].subspace, orthonormalize([[0, 0, 1], [-1, 1, 0]])).distance
    criterion(2, "canonical dual of ex-2.9", max(d1, d2) <= 1e-9,
              f"projector distances {d1:.1e}, {d2:.1e}")


def test_criterion_03_riesz_scaler(criterion):
    rng = np.random.default_rng(SEED)
    frames = [corpus.load_frame("ex-2.7-1")]
    frames += [random_riesz_basis(int(rng.integers(1, 9)), rng) for _ in range(100)]
    worst_res = worst_gram = 0.0
    t0 = time.perf_counter()
    for F in frames:
        Sinv = np.linalg.inv(frame_operator(F))
        for method in ("spd-inverse-sqrt", "synthesis-inverse"):
            sc = construct_riesz_scaler(F, method)
            worst_res = max(worst_res, verify_scaling(F, sc).residual)
            worst_gram = max(worst_gram, float(np.linalg.norm(sc.U.T @ sc.U - Sinv)))
    elapsed = time.perf_counter() - t0
    ok = worst_res <= 1e-9 and worst_gram <= 1e-9 and elapsed < 1.0
    criterion(3, "Riesz scaler, both methods", ok,
              f"residual {worst_res:.1e}, U^T U - S^-1 {worst_gram:.1e}, runtime {elapsed:.2f} s")


def test_criterion_04_riesz_conditions_agree(criterion):
    rng = np.random.default_rng(SEED)
    disagreements = 0
    tally = {True: 0, False: 0}
    for k in range(100):
        F = random_riesz_basis(int(rng.integers(1, 7)), rng)
        if k % 2 == 0:
            # an operator satisfying the conditions: orthogonal times a root of S^-1
            U = random_orthogonal(F.ambient_dim, rng) @ construct_riesz_scaler(F).U
        else:
            U = random_invertible(F.ambient_dim, rng)
        c = check_riesz_conditions(F, U)
        vals = {c[key] for key in ("i", "ii", "iii", "iv")}
        if len(vals) != 1:
            disagreements += 1
        else:
            tally[vals.pop()] += 1
    criterion(4, "conditions (i)-(iv) agree", disagreements == 0,
              f"{disagreements} disagreements, {tally[True]} all-true, {tally[False]} all-false")


def _corpus_riesz_pairs():
    for eid in ("ex-2.7-1", "ex-2.7-2", "ex-2.9"):
        doc = corpus.load(eid)
        F = corpus.load_frame(eid)
        for s in doc["scalings"].values():
            yield F, parse_scaling(s, F.ambient_dim, len(F))


def test_criterion_05_d_operator(criterion):
    rng = np.random.default_rng(SEED)
    pairs = list(_corpus_riesz_pairs())
    for k in range(100):
        F = random_riesz_basis(int(rng.integers(1, 7)), rng)
        if k % 2 == 0:
            sc = construct_riesz_scaler(F)
            sc = ScalingPair(random_orthogonal(F.ambient_dim, rng) @ sc.U, sc.gammas)
        else:
            sc = ScalingPair(random_invertible(F.ambient_dim, rng), random_weights(len(F), rng))
        pairs.append((F, sc))
    mismatches = 0
    for F, sc in pairs:
        if (d_operator_check(F, sc).residual <= 1e-9) != verify_scaling(F, sc).is_parseval:
            mismatches += 1
    criterion(5, "D-operator criterion matches Parseval", mismatches == 0,
              f"{mismatches} mismatches over {len(pairs)} instances")


def test_criterion_06_r2_closed_form(criterion):
    sc = r2_closed_form(np.pi / 6, np.pi / 2)
    U = np.array([[2 / np.sqrt(7), 0], [-np.sqrt(42) / 28, np.sqrt(14) / 4]])
    g = np.array([np.sqrt(10) / 4, SQ2 / 2, np.sqrt(14) / 4])
    errU = float(np.max(np.abs(sc.U - U)))
    errg = float(np.max(np.abs(sc.gammas - g)))
    res = verify_scaling(lines_r2(), sc).residual
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(100):
        t, p = random_admissible_angles(rng)
        worst = max(worst, verify_scaling(line_frame(t, p), r2_closed_form(t, p)).residual)
    ok = errU <= 1e-12 and errg <= 1e-12 and res <= 1e-12 and worst <= 1e-8
    criterion(6, "closed form in R^2", ok,
              f"U error {errU:.1e}, gamma error {errg:.1e}, residual {res:.1e}, random worst {worst:.1e}")


def test_criterion_07_structural_verdicts(criterion):
    rng = np.random.default_rng(SEED)
    ok, notes = True, []
    for eid in ("ex-3.4", "ex-3.5"):
        F = corpus.load_frame(eid)
        v = decide_one_excess(F)
        ok &= (v.status, v.reason) == ("NotScalable", "excess-in-higher-dim-subspace")
        # sampled falsification, not a proof
        low = min(verify_scaling(F, ScalingPair(random_invertible(F.ambient_dim, rng),
                                                random_weights(len(F), rng))).residual
                  for _ in range(20))
        ok &= low > 1e-3
        notes.append(f"{eid}: {v.status} ({v.reason}), smallest sampled residual {low:.3f}")
    criterion(7, "structural non-scalability", ok, "; ".join(notes))


def test_criterion_08_weight_vs_operator(criterion):
    F = lines_r2()
    ws = weight_only_solve(F)
    v = decide_one_excess(F)
    ok = ws.residual > 1e-3 and v.status == "Scalable" and v.residual <= 1e-9
    criterion(8, "weight-only residual > 1e-3 and operator scaling found", ok,
              f"weight-only residual {ws.residual:.1e} with members {list(ws.dropped)} dropped, "
              f"strictly positive weights: {ws.strictly_scalable}; "
              f"verdict {v.status} ({v.reason}) residual {v.residual:.1e}")


def test_criterion_09_split_certificate(criterion):
    doc = corpus.load("ex-3.6")
    F = corpus.load_frame("ex-3.6")
    s = doc["scalings"]["example"]
    sc = ScalingPair(np.array(s["U"], float), s["gammas"])
    assert np.allclose(sc.gammas, [1, SQ2 / 2, SQ2 / 2, 1, 1])
    cert = partition_check(F, sc, [0, 1, 2], [3, 4])
    res = verify_scaling(F, sc).residual
    criterion(9, "partition certificate of ex-3.6", cert.holds and res <= 1e-9,
              f"certificate {cert.holds}, residual {res:.1e}")


def test_criterion_10_property_suites(criterion):
    files = sorted(str(p) for p in TESTS.glob("test_*.py") if p.name != Path(__file__).name)
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *files],
                          capture_output=True, text=True, cwd=TESTS.parent)
    elapsed = time.perf_counter() - t0
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    criterion(10, "property suites under a fixed seed", proc.returncode == 0 and elapsed < 30,
              f"{summary}; {elapsed:.1f} s")
