"""Scalability of fusion frames whose synthesis operator has a 1-dimensional kernel.

A scalable 1-excess frame splits as a line V0 = span{x} plus a fusion Riesz
basis W with x = sum_i x_i, x_i in W_i. The routines here find that split,
evaluate the resulting necessary conditions, check partition certificates,
build explicit scalers and decide scalability where a structural argument
is available.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AngleOrder,
    DegenerateAngles,
    DimensionMismatch,
    NoLineRemovable,
    NonLineInI1,
    NotAFrame,
    NotOneExcess,
    NotSpanning,
    SingularOperator,
    WrongExcess,
)
from .frame import (
    FusionFrame,
    canonical_dual,
    classify,
    excess,
    frame_bounds,
    frame_operator,
    pairwise_orthogonal,
    synthesis_matrix,
)
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerances,
    check_invertible,
    condition_number,
    contains,
    map_subspace,
    numerical_rank,
    orthonormalize,
    projector,
    spd_inverse_sqrt,
    subspace_from_basis,
    subspace_relation,
)
from .riesz import ScalingPair, verify_scaling

REASONS = (
    "excess-in-higher-dim-subspace",
    "one-excess-dual-of-riesz",
    "search-budget-exhausted",
    "closed-form",
    "partition-certificate",
)


# -- decomposition -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OneExcessDecomposition:
    """V = V0 u W with V0 = span{x} at ``excess_index`` and x = sum of x_i."""

    frame: FusionFrame
    excess_index: int
    x: np.ndarray
    rest_indices: tuple[int, ...]
    riesz_rest: FusionFrame
    x_components: dict
    sigma: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "excess_index": self.excess_index,
            "x": self.x.tolist(),
            "rest_indices": list(self.rest_indices),
            "sigma": list(self.sigma),
            "x_components": {str(i): v.tolist() for i, v in self.x_components.items()},
        }


def _require_one_excess(F: FusionFrame, tol: Tolerances, exc=WrongExcess):
    e = excess(F, tol)
    if e != 1:
        raise exc(f"frame has excess {e}, expected 1")
    A, B = frame_bounds(F)
    if not A > tol.rank_rel * B:
        raise NotAFrame("the subspaces do not span the ambient space")


def _is_riesz(F: FusionFrame, tol: Tolerances) -> bool:
    return classify(F, tol).is_riesz_basis


def null_support(F: FusionFrame, tol: Tolerances = DEFAULT_TOL) -> tuple[list[int], dict]:
    """Members touched by the kernel of the synthesis operator (excess 1).

    Returns the support indices and, per member, the ambient vector
    Q_i a_i carried by the unit kernel vector.
    """
    T = np.hstack([W.basis for W in F.subspaces])
    _, _, Vt = np.linalg.svd(T)
    z = Vt[-1]
    parts, start = {}, 0
    for i, W in enumerate(F.subspaces):
        parts[i] = W.basis @ z[start:start + W.rank]
        start += W.rank
    support = [i for i, v in parts.items() if np.linalg.norm(v) > tol.op_rel]
    return support, parts


def decompose_one_excess(F: FusionFrame, tol: Tolerances = DEFAULT_TOL,
                         excess_index: int | None = None) -> OneExcessDecomposition:
    """Split F into a removable line and a fusion Riesz basis.

    Without ``excess_index`` the smallest admissible index is used.
    """
    _require_one_excess(F, tol)
    m = len(F)
    candidates = range(m) if excess_index is None else [excess_index]
    for j in candidates:
        if not 0 <= j < m:
            raise IndexError(f"member index {j} out of range")
        if F[j].subspace.rank != 1:
            continue
        rest = tuple(i for i in range(m) if i != j)
        rest_frame = F.subframe(rest)
        if not _is_riesz(rest_frame, tol):
            continue
        x = F[j].subspace.generator.copy()
        T = np.hstack([F[i].subspace.basis for i in rest])
        coeffs = np.linalg.solve(T, x)
        comps, start = {}, 0
        for i in rest:
            k = F[i].subspace.rank
            comps[i] = F[i].subspace.basis @ coeffs[start:start + k]
            start += k
        sigma = tuple(i for i in rest if np.linalg.norm(comps[i]) > tol.op_rel)
        x.setflags(write=False)
        return OneExcessDecomposition(F, j, x, rest, rest_frame, comps, sigma)
    if excess_index is None:
        raise NoLineRemovable("no line can be removed to leave a fusion Riesz basis")
    raise NoLineRemovable(f"member {excess_index} is not a removable line")


def resolve_gammas(D: OneExcessDecomposition, sc: ScalingPair) -> tuple[float, np.ndarray]:
    """(gamma0, gammas of the Riesz part in ``rest_indices`` order).

    ``sc`` either carries one gamma per member, or gamma0 plus one gamma per
    Riesz member.
    """
    m = len(D.frame)
    g = sc.gammas
    if g.size == m:
        g0 = g[D.excess_index]
        if sc.gamma0 is not None and not np.isclose(sc.gamma0, g0):
            raise ValueError("gamma0 conflicts with the gamma of the removable line")
        return float(g0), np.array([g[i] for i in D.rest_indices])
    if g.size == m - 1 and sc.gamma0 is not None:
        return float(sc.gamma0), np.array(g)
    raise DimensionMismatch(f"{g.size} gammas do not fit a frame of {m} members")


def full_scaling(D: OneExcessDecomposition, sc: ScalingPair) -> ScalingPair:
    """The scaling with one gamma per member of the original frame."""
    g0, rest = resolve_gammas(D, sc)
    g = np.empty(len(D.frame))
    g[D.excess_index] = g0
    g[list(D.rest_indices)] = rest
    return ScalingPair(sc.U, g)


# -- necessary conditions and the identity residual -----------------------------

@dataclass(frozen=True)
class ConditionReport:
    conditions: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return all(self.conditions.values())

    def to_dict(self) -> dict:
        return {"all_hold": self.all_hold, "conditions": dict(self.conditions),
                "residuals": dict(self.residuals), "notes": dict(self.notes)}


def necessary_conditions(D: OneExcessDecomposition, sc: ScalingPair,
                         tol: Tolerances = DEFAULT_TOL) -> ConditionReport:
    """Evaluate the necessary conditions for (U, gamma)-scalability.

    Effective weights w_i gamma_i are used throughout; for 1-uniform frames
    they are the gammas themselves. Orthogonality clauses are tested on
    orthonormalised subspaces, so they do not depend on the scale of U.
    """
    F = D.frame
    n = F.ambient_dim
    U = check_invertible(sc.U, tol, n=n)
    g0, g_rest = resolve_gammas(D, sc)
    eff0 = F[D.excess_index].weight * g0
    eff = {i: F[i].weight * g for i, g in zip(D.rest_indices, g_rest)}
    thresh = tol.op_rel * np.sqrt(n)
    G = U.T @ U
    conds, res = {}, {}

    conds["i:gamma0<1"] = bool(eff0 < 1 - tol.op_rel)
    res["i:gamma0<1"] = float(eff0)
    S_rest = np.zeros((n, n))
    for i in D.rest_indices:
        S_rest += eff[i] ** 2 * projector(map_subspace(U, F[i].subspace, tol))
    y = U @ D.x
    y /= np.linalg.norm(y)
    r = float(np.linalg.norm(S_rest @ y - (1 - eff0**2) * y))
    conds["i:eigenvector"], res["i:eigenvector"] = bool(r <= thresh), r

    for j in D.rest_indices:
        GW = map_subspace(G, F[j].subspace, tol)
        x_overlap = float(np.linalg.norm(GW.basis.T @ D.x))
        if j not in D.sigma:
            conds[f"ii:{j}:gamma=1"] = bool(abs(eff[j] - 1) <= tol.op_rel)
            conds[f"ii:{j}:x_perp"] = bool(x_overlap <= thresh)
            overl = max((subspace_relation(GW, F[i].subspace, tol).overlap
                         for i in D.rest_indices if i != j), default=0.0)
            conds[f"ii:{j}:perp_rest"] = bool(overl <= thresh)
            res[f"ii:{j}:gamma=1"] = float(abs(eff[j] - 1))
            res[f"ii:{j}:x_perp"] = x_overlap
            res[f"ii:{j}:perp_rest"] = overl
        else:
            conds[f"iii:{j}:gamma!=1"] = bool(abs(eff[j] - 1) > tol.op_rel)
            conds[f"iii:{j}:x_not_perp"] = bool(x_overlap > thresh)
            conds[f"iii:{j}:line"] = F[j].subspace.rank == 1
            res[f"iii:{j}:gamma!=1"] = float(abs(eff[j] - 1))
            res[f"iii:{j}:x_not_perp"] = x_overlap
    notes = {"normalization": "eigenvector test uses U x scaled to unit norm",
             "effective_gamma0": float(eff0)}
    return ConditionReport(conds, res, notes)


@dataclass(frozen=True)
class IdentityResidual:
    residual: float
    holds: bool
    per_member: dict
    containments: dict
    gamma0_normalized: float

    def to_dict(self) -> dict:
        return {"residual": self.residual, "holds": self.holds,
                "per_member": {str(k): v for k, v in self.per_member.items()},
                "containments": {str(k): v for k, v in self.containments.items()},
                "gamma0_normalized": self.gamma0_normalized}


def scaling_identity_residual(D: OneExcessDecomposition, sc: ScalingPair,
                              tol: Tolerances = DEFAULT_TOL) -> IdentityResidual:
    """Largest violation of the per-member operator identity

        S^-1 P_i = g0^2 U^T U P_x S^-1 P_i + gamma_i^2 U^T P_{U W_i} U^-T

    where S is the frame operator of the Riesz part and g0 is the effective
    weight of the line rescaled as if ||U x|| = 1. The identity holds for
    every i exactly when the scaling is Parseval. Also reports whether
    S^-1 W_i lies in U^T U (W_i + span{x}) for every i.
    """
    F = D.frame
    n = F.ambient_dim
    U = check_invertible(sc.U, tol, n=n)
    g0, g_rest = resolve_gammas(D, sc)
    Sinv = np.linalg.inv(frame_operator(D.riesz_rest))
    G = U.T @ U
    UinvT = np.linalg.inv(U).T
    Px = np.outer(D.x, D.x)
    g0n2 = (F[D.excess_index].weight * g0) ** 2 / float(np.linalg.norm(U @ D.x)) ** 2
    per, cont = {}, {}
    for i, g in zip(D.rest_indices, g_rest):
        W = F[i].subspace
        Pi = projector(W)
        lhs = Sinv @ Pi
        rhs = g0n2 * G @ Px @ Sinv @ Pi + g**2 * U.T @ projector(map_subspace(U, W, tol)) @ UinvT
        per[i] = float(np.linalg.norm(lhs - rhs))
        target = subspace_from_basis(G @ np.column_stack([W.basis, D.x]), tol)
        cont[i] = contains(target, map_subspace(Sinv, W, tol), tol)
    residual = max(per.values())
    scale = max(1.0, float(np.linalg.norm(Sinv, 2)))
    return IdentityResidual(residual, bool(residual <= tol.op_rel * np.sqrt(n) * scale),
                            per, cont, float(np.sqrt(g0n2)))


# -- partition certificates ----------------------------------------------------

@dataclass(frozen=True)
class PartitionCertificate:
    I1: tuple[int, ...]
    I2: tuple[int, ...]
    line_frame_coeffs: tuple[float, ...]
    direct_sum_ok: bool
    orthogonal_rest: bool
    rest_weights_unit: bool
    lines_one_excess: bool
    clause_a: bool
    clause_b: bool
    residuals: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return (self.direct_sum_ok and self.clause_a and self.rest_weights_unit
                and self.lines_one_excess)

    @property
    def clauses_agree(self) -> bool:
        return self.clause_a == self.clause_b

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        return {
            "I1": list(self.I1), "I2": list(self.I2),
            "line_frame_coeffs": list(self.line_frame_coeffs),
            "direct_sum_ok": self.direct_sum_ok, "orthogonal_rest": self.orthogonal_rest,
            "rest_weights_unit": self.rest_weights_unit,
            "lines_one_excess": self.lines_one_excess,
            "clause_a": self.clause_a, "clause_b": self.clause_b,
            "holds": self.holds, "residuals": dict(self.residuals),
        }


def _span(vectors: list[np.ndarray], n: int, tol: Tolerances) -> Subspace | None:
    return orthonormalize(vectors, tol) if vectors else None


def _validate_partition(F: FusionFrame, I1, I2):
    I1, I2 = tuple(sorted(I1)), tuple(sorted(I2))
    if sorted(I1 + I2) != list(range(len(F))):
        raise ValueError("I1 and I2 must partition the member indices")
    for i in I1:
        if F[i].subspace.rank != 1:
            raise NonLineInI1(f"member {i} has rank {F[i].subspace.rank}")
    return I1, I2


def partition_check(F: FusionFrame, sc: ScalingPair, I1, I2,
                    tol: Tolerances = DEFAULT_TOL) -> PartitionCertificate:
    """Check that (U, gamma) is certified by the split I1 (lines) / I2.

    Line part: the images u_i of the unit generators span H1 and satisfy
    sum_{I1} (w_i gamma_i)^2 u_i u_i^T = P_H1 with |I1| = dim H1 + 1. Rest:
    the U W_i are pairwise orthogonal with effective weight 1. H1 and the
    span of the rest must be orthogonal complements.

    The second form checks the same thing through U^T U: on the line span
    L it must equal the inverse of the frame operator of {c_i f_i} with
    c_i = w_i gamma_i / ||U f_i||; on the span M of the rest its
    compression must map each W_i onto the pseudo-inverse image S'^+ W_i.
    """
    if excess(F, tol) != 1:
        raise NotOneExcess("partition certificates apply to 1-excess frames")
    I1, I2 = _validate_partition(F, I1, I2)
    n = F.ambient_dim
    U = check_invertible(sc.U, tol, n=n)
    if sc.gammas.size != len(F):
        raise DimensionMismatch("one gamma per member is required")
    thresh = tol.op_rel * np.sqrt(n)
    eff = F.weights * sc.gammas
    G = U.T @ U
    res = {}

    f = {i: F[i].subspace.generator for i in I1}
    Uf = {i: U @ f[i] for i in I1}
    H1 = _span([Uf[i] for i in I1], n, tol)
    rest_imgs = [map_subspace(U, F[i].subspace, tol) for i in I2]
    UM = _span([v for S in rest_imgs for v in S.basis.T], n, tol)
    d1 = 0 if H1 is None else H1.rank
    d2 = 0 if UM is None else UM.rank
    cross = 0.0 if H1 is None or UM is None else subspace_relation(H1, UM, tol).overlap
    res["direct_sum_overlap"] = cross
    direct_sum_ok = bool(d1 + d2 == n and cross <= thresh)

    lines_one_excess = bool(H1 is not None and len(I1) == d1 + 1)
    if H1 is not None:
        S1 = sum(eff[i] ** 2 * np.outer(Uf[i], Uf[i]) / (Uf[i] @ Uf[i]) for i in I1)
        res["lines_parseval"] = float(np.linalg.norm(S1 - projector(H1)))
        lines_ok = res["lines_parseval"] <= thresh
    else:
        lines_ok = True
    overl = [subspace_relation(rest_imgs[a], rest_imgs[b], tol).overlap
             for a in range(len(I2)) for b in range(a + 1, len(I2))]
    res["rest_overlap"] = max(overl, default=0.0)
    orthogonal_rest = bool(res["rest_overlap"] <= thresh)
    rest_weights_unit = bool(all(abs(eff[i] - 1) <= tol.op_rel for i in I2))
    clause_a = bool(lines_ok and orthogonal_rest)

    lines_b = True
    if I1:
        L = orthonormalize([f[i] for i in I1], tol)
        c = {i: eff[i] / np.linalg.norm(Uf[i]) for i in I1}
        Sc = sum(c[i] ** 2 * np.outer(f[i], f[i]) for i in I1)
        Q = L.basis
        target = np.linalg.inv(Q.T @ Sc @ Q)
        res["lines_gram"] = float(np.linalg.norm(Q.T @ G @ Q - target))
        lines_b = res["lines_gram"] <= thresh * max(1.0, float(np.linalg.norm(target, 2)))
    rest_b = True
    if I2:
        M = _span([v for i in I2 for v in F[i].subspace.basis.T], n, tol)
        PM = projector(M)
        S2 = sum(F[i].weight ** 2 * projector(F[i].subspace) for i in I2)
        S2p = np.linalg.pinv(S2, rcond=tol.rank_rel * n)
        dists = []
        for i in I2:
            Q = F[i].subspace.basis
            a = subspace_from_basis(PM @ G @ Q, tol)
            b = subspace_from_basis(S2p @ Q, tol)
            dists.append(subspace_relation(a, b, tol).distance)
        res["rest_dual"] = max(dists)
        rest_b = res["rest_dual"] <= thresh
    clause_b = bool(lines_b and rest_b)

    return PartitionCertificate(
        I1=I1, I2=I2,
        line_frame_coeffs=tuple(float(sc.gammas[i]) for i in I1),
        direct_sum_ok=direct_sum_ok, orthogonal_rest=orthogonal_rest,
        rest_weights_unit=rest_weights_unit, lines_one_excess=lines_one_excess,
        clause_a=clause_a, clause_b=clause_b, residuals=res,
    )


def partition_scaler(F: FusionFrame, I1, I2, tol: Tolerances = DEFAULT_TOL) -> ScalingPair:
    """Explicit scaler for a split I1 (lines) / I2.

    Sends the line span L to the first coordinates through
    (Q_L^T S_F Q_L)^(-1/2), where S_F = sum_{I1} f_i f_i^T, and the members
    of I2 to the remaining coordinate blocks. Raises SingularOperator when L
    and the span of I2 do not form a direct sum of R^n.
    """
    I1, I2 = _validate_partition(F, I1, I2)
    n = F.ambient_dim
    if not I1:
        raise ValueError("I1 must contain at least one line")
    f = [F[i].subspace.generator for i in I1]
    L = orthonormalize(f, tol)
    blocks = [F[i].subspace.basis for i in I2]
    B = np.hstack([L.basis, *blocks])
    if B.shape[1] != n or condition_number(B) > tol.cond_max:
        raise SingularOperator("line span and remaining members do not split R^n")
    SF = sum(np.outer(v, v) for v in f)
    root = spd_inverse_sqrt(L.basis.T @ SF @ L.basis, tol)
    d = L.rank
    target = np.zeros((n, n))
    target[:d, :d] = root
    target[d:, d:] = np.eye(n - d)
    U = target @ np.linalg.inv(B)
    g = np.empty(len(F))
    for i in I1:
        g[i] = np.linalg.norm(U @ F[i].subspace.generator) / F[i].weight
    for i in I2:
        g[i] = 1.0 / F[i].weight
    return ScalingPair(U, g)


def candidate_partitions(F: FusionFrame, tol: Tolerances = DEFAULT_TOL, exhaustive_limit: int = 12):
    """Yield (I1, I2) splits worth trying, the kernel-support split first.

    For frames of at most ``exhaustive_limit`` members every subset of the
    lines is enumerated afterwards.
    """
    m = len(F)
    lines = [i for i in range(m) if F[i].subspace.rank == 1]
    seen = set()
    support, _ = null_support(F, tol)
    if all(F[i].subspace.rank == 1 for i in support):
        first = tuple(sorted(support))
        seen.add(first)
        yield first, tuple(i for i in range(m) if i not in first)
    if m > exhaustive_limit:
        return
    for size in range(1, len(lines) + 1):
        for I1 in itertools.combinations(lines, size):
            if I1 in seen:
                continue
            seen.add(I1)
            yield I1, tuple(i for i in range(m) if i not in I1)


# -- lines in the plane ----------------------------------------------------------

_CORNERS = ((0.0, 0.0), (0.0, np.pi), (np.pi, np.pi))


def r2_closed_form(theta: float, psi: float, tol: Tolerances = DEFAULT_TOL) -> ScalingPair:
    """Lower-triangular scaler for the lines at angles 0, theta, psi in R^2."""
    slack = tol.op_rel
    if not (-slack <= theta <= psi + slack and psi <= np.pi + slack):
        raise AngleOrder(f"need 0 <= theta <= psi <= pi, got ({theta}, {psi})")
    for a, b in _CORNERS:
        if np.hypot(theta - a, psi - b) <= slack:
            raise DegenerateAngles(f"lines at ({theta}, {psi}) do not span R^2")
    ct, st, cp, sp = np.cos(theta), np.sin(theta), np.cos(psi), np.sin(psi)
    p = 1 + ct**2 + cp**2
    q = st**2 + sp**2 + np.sin(psi - theta) ** 2
    a = 1 / np.sqrt(p)
    b = -(ct * st + cp * sp) / np.sqrt(p * q)
    c = np.sqrt(p) / np.sqrt(q)
    U = np.array([[a, 0.0], [b, c]])
    gammas = [
        np.sqrt(a**2 + b**2),
        np.sqrt((a * ct) ** 2 + (b * ct + c * st) ** 2),
        np.sqrt((a * cp) ** 2 + (b * cp + c * sp) ** 2),
    ]
    return ScalingPair(U, gammas)


@dataclass(frozen=True, eq=False)
class R2Canonical:
    """Orthogonal R and ordering with R f_{perm[k]} = +-(cos a_k, sin a_k), a = (0, theta, psi)."""

    theta: float
    psi: float
    R: np.ndarray
    permutation: tuple[int, int, int]

    def pull_back(self, sc: ScalingPair) -> ScalingPair:
        """Scaling of the original lines from a scaling of the canonical ones."""
        g = np.empty(3)
        for k, i in enumerate(self.permutation):
            g[i] = sc.gammas[k]
        return ScalingPair(sc.U @ self.R, g)


def _line_angle(v: np.ndarray, tol: Tolerances) -> float:
    a = float(np.arctan2(v[1], v[0]) % np.pi)
    return 0.0 if a >= np.pi - tol.op_rel or a <= tol.op_rel else a


def canonicalize_r2(lines, tol: Tolerances = DEFAULT_TOL) -> R2Canonical:
    """Rotate/reflect and re-index three lines of R^2 into standard position.

    Among the admissible choices the one with the smallest psi, then the
    smallest theta, is kept; ties go to the earliest reference line and to
    rotations over reflections.
    """
    if isinstance(lines, FusionFrame):
        if lines.ambient_dim != 2 or len(lines) != 3 or any(r != 1 for r in lines.ranks):
            raise DimensionMismatch("need a frame of three lines in R^2")
        vecs = np.array([W.generator for W in lines.subspaces])
    else:
        vecs = np.asarray(lines, dtype=float)
    if vecs.shape != (3, 2):
        raise DimensionMismatch("need three vectors in R^2")
    norms = np.linalg.norm(vecs, axis=1)
    if np.any(norms == 0):
        raise NotSpanning("zero generator")
    vecs = vecs / norms[:, None]
    if numerical_rank(vecs, tol) < 2:
        raise NotSpanning("the lines do not span R^2")
    best = None
    for ref in range(3):
        c, s = vecs[ref]
        rot = np.array([[c, s], [-s, c]])
        for reflect in (False, True):
            R = np.diag([1.0, -1.0]) @ rot if reflect else rot
            others = [k for k in range(3) if k != ref]
            angles = sorted((_line_angle(R @ vecs[k], tol), k) for k in others)
            (theta, k1), (psi, k2) = angles
            cand = (psi, theta, R, (ref, k1, k2))
            if best is None or psi < best[0] - tol.op_rel or (
                    abs(psi - best[0]) <= tol.op_rel and theta < best[1] - tol.op_rel):
                best = cand
    psi, theta, R, perm = best
    return R2Canonical(theta, psi, R, perm)


# -- decision ------------------------------------------------------------------

@dataclass(frozen=True)
class ScalabilityVerdict:
    status: str  # "Scalable" | "NotScalable" | "Undecided"
    reason: str
    scaling: ScalingPair | None = None
    residual: float | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"status": self.status, "reason": self.reason, "residual": self.residual,
               "details": self.details}
        if self.scaling is not None:
            out["scaling"] = self.scaling.to_dict()
        return out


def recover_riesz_parent(F: FusionFrame, tol: Tolerances = DEFAULT_TOL):
    """Exhibit F as a 1-excess dual of a fusion Riesz basis, if possible.

    The enlarged member is a member of rank >= 2 touched by the kernel of the
    synthesis operator; dropping the kernel direction from it leaves a Riesz
    basis V'. The parent is W = canonical dual of V', for which
    S_W^-1 W_i = V'_i. Returns (j, parent) or None.
    """
    support, parts = null_support(F, tol)
    for j in support:
        Vj = F[j].subspace
        if Vj.rank < 2:
            continue
        v = parts[j] / np.linalg.norm(parts[j])
        shrunk = subspace_from_basis(Vj.basis - np.outer(v, v @ Vj.basis), tol)
        if shrunk.rank != Vj.rank - 1:
            continue
        subs = F.subspaces
        subs[j] = shrunk
        Vp = FusionFrame.from_subspaces(subs, F.weights)
        if not _is_riesz(Vp, tol):
            continue
        parent = canonical_dual(Vp, tol)
        back = canonical_dual(parent, tol)
        ok = all(contains(F[i].subspace, back[i].subspace, tol) for i in range(len(F)))
        ok = ok and F[j].subspace.rank == back[j].subspace.rank + 1
        if ok:
            return j, parent
    return None


def decide_one_excess(F: FusionFrame, tol: Tolerances = DEFAULT_TOL, budget=None) -> ScalabilityVerdict:
    """Decide operator-scalability of a 1-excess fusion frame.

    NotScalable is returned only with a structural reason; a search that
    fails to converge gives Undecided.
    """
    _require_one_excess(F, tol)
    n = F.ambient_dim
    try:
        D = decompose_one_excess(F, tol)
    except NoLineRemovable:
        support, _ = null_support(F, tol)
        return ScalabilityVerdict("NotScalable", "excess-in-higher-dim-subspace",
                                  details={"kernel_support": support})

    found = recover_riesz_parent(F, tol)
    if found is not None:
        j, parent = found
        return ScalabilityVerdict(
            "NotScalable", "one-excess-dual-of-riesz",
            details={"enlarged_member": j,
                     "parent_ranks": parent.ranks,
                     "parent_bases": [W.basis.T.tolist() for W in parent.subspaces]})

    if n == 2 and all(r == 1 for r in F.ranks):
        canon = canonicalize_r2(F, tol)
        sc = canon.pull_back(r2_closed_form(canon.theta, canon.psi, tol))
        rep = verify_scaling(F, sc, tol)
        if rep.is_parseval:
            return ScalabilityVerdict("Scalable", "closed-form", sc, rep.residual,
                                      details={"theta": canon.theta, "psi": canon.psi,
                                               "permutation": list(canon.permutation),
                                               "decomposition": D.to_dict()})

    from .search import SearchOptions, search_operator_scaling

    opts = budget if budget is not None else SearchOptions()
    if not opts.structural:
        opts = opts.replace(structural=True)
    result = search_operator_scaling(F, opts, tol)
    if result.converged:
        details = {"evaluations": result.evaluations, "decomposition": D.to_dict()}
        if result.partition is not None:
            cert = partition_check(F, result.best, *result.partition, tol)
            details["certificate"] = cert.to_dict()
        return ScalabilityVerdict("Scalable", "partition-certificate", result.best,
                                  result.residual, details)
    return ScalabilityVerdict("Undecided", "search-budget-exhausted", result.best, result.residual,
                              details={"evaluations": result.evaluations, "seed": opts.seed})
