"""Operator-plus-weight scalings, with constructive results for fusion Riesz bases.

A scaling (U, gamma) of a fusion frame {(W_i, w_i)} is Parseval when the
frame {(U W_i, w_i gamma_i)} has the identity as frame operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NotRieszBasis,
    ScalingNotVerified,
    SingularOperator,
    ZeroCoefficient,
)
from .frame import (
    FusionFrame,
    canonical_dual,
    frame_operator,
    is_riesz_basis,
    pairwise_orthogonal,
    synthesis_matrix,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    check_invertible,
    condition_number,
    is_orthogonal_matrix,
    map_subspace,
    projector,
    spd_inverse_sqrt,
    spd_sqrt,
    subspace_relation,
)


@dataclass(frozen=True, eq=False)
class ScalingPair:
    """Invertible operator ``U`` and positive weight multipliers ``gammas``.

    ``gamma0`` is only used by the 1-excess routines, where it multiplies the
    weight of the removable line.
    """

    U: np.ndarray
    gammas: np.ndarray
    gamma0: float | None = None

    def __post_init__(self):
        U = as_matrix(self.U, name="U")
        if U.shape[0] != U.shape[1]:
            raise DimensionMismatch(f"U must be square, got {U.shape}")
        g = np.array(self.gammas, dtype=float).ravel()
        if g.size == 0 or not np.all(np.isfinite(g)) or np.any(g <= 0):
            raise ValueError("gammas must be finite and strictly positive")
        g.setflags(write=False)
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "gammas", g)
        if self.gamma0 is not None:
            g0 = float(self.gamma0)
            if not np.isfinite(g0) or g0 <= 0:
                raise ValueError("gamma0 must be strictly positive")
            object.__setattr__(self, "gamma0", g0)

    @property
    def n(self) -> int:
        return self.U.shape[0]

    @classmethod
    def inverse_weights(cls, F: FusionFrame, U) -> "ScalingPair":
        """The pair (U, 1/w)."""
        return cls(U, 1.0 / F.weights)

    def to_dict(self) -> dict:
        out = {"U": self.U.tolist(), "gammas": self.gammas.tolist()}
        if self.gamma0 is not None:
            out["gamma0"] = self.gamma0
        return out


@dataclass(frozen=True)
class ScalingReport:
    scaled_operator: np.ndarray
    residual: float
    is_parseval: bool
    transformed_residual: float
    per_pair_conditions: dict | None = None

    def to_dict(self) -> dict:
        out = {
            "residual": self.residual,
            "is_parseval": self.is_parseval,
            "transformed_residual": self.transformed_residual,
            "scaled_operator": self.scaled_operator.tolist(),
        }
        if self.per_pair_conditions is not None:
            out["conditions"] = self.per_pair_conditions
        return out


def _check_pair(F: FusionFrame, sc: ScalingPair, tol: Tolerances) -> np.ndarray:
    if sc.n != F.ambient_dim:
        raise DimensionMismatch(f"U is {sc.n}x{sc.n} but the frame lives in R^{F.ambient_dim}")
    if sc.gammas.size != len(F):
        raise DimensionMismatch(f"{sc.gammas.size} gammas for {len(F)} subspaces")
    return check_invertible(sc.U, tol)


def scaled_operator(F: FusionFrame, sc: ScalingPair, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """sum_i (w_i gamma_i)^2 P_{U W_i}."""
    U = _check_pair(F, sc, tol)
    S = np.zeros((F.ambient_dim, F.ambient_dim))
    for m, g in zip(F.members, sc.gammas):
        S += (m.weight * g) ** 2 * projector(map_subspace(U, m.subspace, tol))
    return (S + S.T) / 2


def parseval_threshold(n: int, tol: Tolerances) -> float:
    return tol.op_rel * np.sqrt(n)


def verify_scaling(F: FusionFrame, sc: ScalingPair, tol: Tolerances = DEFAULT_TOL) -> ScalingReport:
    """Scaled frame operator and its distance to the identity.

    Also evaluates the same weights on the mapped frame U F with the
    identity operator; the two residuals agree by construction.
    """
    n = F.ambient_dim
    S = scaled_operator(F, sc, tol)
    residual = float(np.linalg.norm(S - np.eye(n)))
    UF = F.mapped(sc.U, tol)
    S2 = scaled_operator(UF, ScalingPair(np.eye(n), sc.gammas), tol)
    return ScalingReport(
        scaled_operator=S,
        residual=residual,
        is_parseval=bool(residual <= parseval_threshold(n, tol)),
        transformed_residual=float(np.linalg.norm(S2 - np.eye(n))),
    )


@dataclass(frozen=True)
class DOperatorCheck:
    lhs: np.ndarray
    rhs: np.ndarray
    residual: float
    criterion_holds: bool
    equivalent_to_parseval: bool


def d_operator_check(F: FusionFrame, sc: ScalingPair, tol: Tolerances = DEFAULT_TOL) -> DOperatorCheck:
    """Compare T D^-1 D^-T T^T with (U^T U)^-1.

    D acts block-diagonally on the direct sum of the W_i: in the local
    orthonormal coordinates of W_i and U W_i its i-th block is
    gamma_i^-1 Q'_i^T U Q_i.
    """
    U = _check_pair(F, sc, tol)
    n = F.ambient_dim
    lhs = np.zeros((n, n))
    for m, g in zip(F.members, sc.gammas):
        Q = m.subspace.basis
        Qp = map_subspace(U, m.subspace, tol).basis
        block = (Qp.T @ U @ Q) / g
        if condition_number(block) > tol.cond_max:
            raise SingularOperator("a block of the D operator is numerically singular")
        X = m.weight * np.linalg.solve(block.T, Q.T).T  # w_i Q_i B_i^-1
        lhs += X @ X.T
    lhs = (lhs + lhs.T) / 2
    rhs = np.linalg.inv(U.T @ U)
    rhs = (rhs + rhs.T) / 2
    residual = float(np.linalg.norm(lhs - rhs))
    holds = bool(residual <= parseval_threshold(n, tol) * max(1.0, np.linalg.norm(rhs, 2)))
    parseval = verify_scaling(F, sc, tol).is_parseval
    return DOperatorCheck(lhs, rhs, residual, holds, holds == parseval)


def _require_riesz(F: FusionFrame, tol: Tolerances):
    if not is_riesz_basis(F, tol):
        raise NotRieszBasis("the frame is not a fusion Riesz basis")


def construct_riesz_scaler(F: FusionFrame, method: str = "spd-inverse-sqrt",
                           tol: Tolerances = DEFAULT_TOL) -> ScalingPair:
    """Canonical scaler (U, 1/w) of a fusion Riesz basis.

    ``synthesis-inverse`` inverts the square synthesis matrix built from the
    local orthonormal bases; ``spd-inverse-sqrt`` uses S^(-1/2). Both satisfy
    U^T U = S^-1.
    """
    _require_riesz(F, tol)
    if method == "synthesis-inverse":
        U = np.linalg.inv(synthesis_matrix(F))
    elif method == "spd-inverse-sqrt":
        U = spd_inverse_sqrt(frame_operator(F), tol)
    else:
        raise ValueError(f"unknown method {method!r}")
    return ScalingPair.inverse_weights(F, U)


@dataclass(frozen=True)
class RieszConditions:
    """Boolean and residual for each named condition."""

    conditions: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    orthogonal_frame: bool = False
    consistent: bool = True

    def __getitem__(self, key) -> bool:
        return self.conditions[key]

    @property
    def all_hold(self) -> bool:
        return all(self.conditions.values())

    def to_dict(self) -> dict:
        return {
            "conditions": dict(self.conditions),
            "residuals": dict(self.residuals),
            "orthogonal_frame": self.orthogonal_frame,
            "consistent": self.consistent,
        }


def check_riesz_conditions(F: FusionFrame, U, tol: Tolerances = DEFAULT_TOL) -> RieszConditions:
    """Evaluate the equivalent characterisations of (U, 1/w)-scalability.

    i    (U, 1/w) is Parseval on F
    ii   ((S U^T)^-1, 1/w) is Parseval on F
    iii  U^T U W_i = S^-1 W_i for every i
    iv   the subspaces U W_i are pairwise orthogonal

    For a frame of pairwise orthogonal subspaces also

    v    U^T U W_i = W_i
    vi   ((U^T)^-1, 1/w) is Parseval on F
    vii  (U, 1/w) is Parseval on the canonical dual

    (i)-(iv) are equivalent; a disagreement is reported via ``consistent``.
    """
    _require_riesz(F, tol)
    U = check_invertible(U, tol, n=F.ambient_dim)
    S = frame_operator(F)
    Sinv = np.linalg.inv(S)
    G = U.T @ U
    conds, res = {}, {}

    rep = verify_scaling(F, ScalingPair.inverse_weights(F, U), tol)
    conds["i"], res["i"] = rep.is_parseval, rep.residual
    rep = verify_scaling(F, ScalingPair.inverse_weights(F, np.linalg.inv(S @ U.T)), tol)
    conds["ii"], res["ii"] = rep.is_parseval, rep.residual

    dists = [subspace_relation(map_subspace(G, W, tol), map_subspace(Sinv, W, tol), tol).distance
             for W in F.subspaces]
    res["iii"] = max(dists)
    conds["iii"] = bool(res["iii"] <= tol.op_rel * np.sqrt(F.ambient_dim))

    images = [map_subspace(U, W, tol) for W in F.subspaces]
    overlaps = [subspace_relation(images[i], images[j], tol).overlap
                for i in range(len(images)) for j in range(i + 1, len(images))]
    res["iv"] = max(overlaps, default=0.0)
    conds["iv"] = bool(res["iv"] <= tol.op_rel * np.sqrt(F.ambient_dim))

    consistent = len({conds[k] for k in ("i", "ii", "iii", "iv")}) == 1
    orthogonal = pairwise_orthogonal(F.subspaces, tol)
    if orthogonal:
        dists = [subspace_relation(map_subspace(G, W, tol), W, tol).distance for W in F.subspaces]
        res["v"] = max(dists)
        conds["v"] = bool(res["v"] <= tol.op_rel * np.sqrt(F.ambient_dim))
        rep = verify_scaling(F, ScalingPair.inverse_weights(F, np.linalg.inv(U.T)), tol)
        conds["vi"], res["vi"] = rep.is_parseval, rep.residual
        dual = canonical_dual(F, tol)
        rep = verify_scaling(dual, ScalingPair.inverse_weights(dual, U), tol)
        conds["vii"], res["vii"] = rep.is_parseval, rep.residual
        consistent = consistent and len(set(conds.values())) == 1
    return RieszConditions(conds, res, orthogonal, consistent)


TRANSFER_TARGETS = ("transformed", "canonical_dual", "dual_inverse_adjoint")


def transfer_scaling(F: FusionFrame, U, target: str, T=None,
                     tol: Tolerances = DEFAULT_TOL) -> tuple[FusionFrame, ScalingPair]:
    """Carry a verified scaler (U, 1/w) of a Riesz basis over to a related frame.

    ``transformed``           T F scaled by U T^-1
    ``canonical_dual``        dual frame scaled by U S
    ``dual_inverse_adjoint``  dual frame scaled by (U^T)^-1
    """
    _require_riesz(F, tol)
    U = check_invertible(U, tol, n=F.ambient_dim)
    rep = verify_scaling(F, ScalingPair.inverse_weights(F, U), tol)
    if not rep.is_parseval:
        raise ScalingNotVerified(f"(U, 1/w) is not Parseval on the frame (residual {rep.residual:.3e})")
    if target == "transformed":
        if T is None:
            raise ValueError("target 'transformed' needs an operator T")
        T = check_invertible(T, tol, n=F.ambient_dim)
        G, V = F.mapped(T, tol), U @ np.linalg.inv(T)
    elif target == "canonical_dual":
        G, V = canonical_dual(F, tol), U @ frame_operator(F)
    elif target == "dual_inverse_adjoint":
        G, V = canonical_dual(F, tol), np.linalg.inv(U.T)
    else:
        raise ValueError(f"unknown target {target!r}; expected one of {TRANSFER_TARGETS}")
    sc = ScalingPair.inverse_weights(G, V)
    rep = verify_scaling(G, sc, tol)
    if not rep.is_parseval:
        raise ScalingNotVerified(f"transferred scaling failed (residual {rep.residual:.3e})")
    return G, sc


def scaler_family_from_coeffs(F: FusionFrame, coeffs, isometry=None,
                              tol: Tolerances = DEFAULT_TOL) -> ScalingPair:
    """Scaler U = E G^(1/2) built from per-vector coefficients.

    G sends the local orthonormal vector e_ij of W_i to
    c_ij w_i^2 S^-1 e_ij, so G W_i = S^-1 W_i and <G e_ij, e_ij> = c_ij.
    G must come out symmetric positive definite (it does exactly when every
    c_ij > 0); ``isometry`` is an orthogonal E, identity by default.
    """
    _require_riesz(F, tol)
    n = F.ambient_dim
    if len(coeffs) != len(F):
        raise DimensionMismatch("one coefficient list per member is required")
    c = []
    for m, ci in zip(F.members, coeffs):
        ci = np.asarray(ci, dtype=float).ravel()
        if ci.size != m.subspace.rank:
            raise DimensionMismatch(f"member of rank {m.subspace.rank} got {ci.size} coefficients")
        if np.any(np.abs(ci) <= tol.rank_rel):
            raise ZeroCoefficient("coefficients must be nonzero")
        c.append(ci)
    c = np.concatenate(c)
    E_loc = np.hstack([W.basis for W in F.subspaces])
    w2 = np.concatenate([np.full(m.subspace.rank, m.weight**2) for m in F.members])
    Sinv = np.linalg.inv(frame_operator(F))
    G = Sinv @ E_loc @ np.diag(c * w2) @ np.linalg.inv(E_loc)
    G_root = spd_sqrt(G, tol)  # raises NotSPD for unusable coefficients
    if isometry is None:
        E = np.eye(n)
    else:
        E = as_matrix(isometry, name="isometry")
        if not is_orthogonal_matrix(E, tol):
            raise ValueError("isometry must be an orthogonal matrix")
    U = E @ G_root
    sc = ScalingPair.inverse_weights(F, U)
    rep = verify_scaling(F, sc, tol)
    norms = np.linalg.norm(U @ E_loc, axis=0) ** 2
    if not rep.is_parseval or np.any(np.abs(norms - c) > tol.op_rel * np.sqrt(n) * np.abs(c)):
        raise ScalingNotVerified("assembled scaler failed verification")
    return sc
