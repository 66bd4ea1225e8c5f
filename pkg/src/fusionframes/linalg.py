"""Dense real linear algebra used throughout the package.

Every rank, equality and invertibility decision goes through a single
:class:`Tolerances` value so that results are reproducible and scale
invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NotSPD, SingularOperator, ZeroSpan


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds.

    op_rel
        relative tolerance for operator / subspace equality.
    rank_rel
        relative singular value threshold for rank decisions.
    cond_max
        largest condition number still treated as invertible.
    """

    op_rel: float = 1e-9
    rank_rel: float = 1e-12
    cond_max: float = 1e12

    def __post_init__(self):
        for name in ("op_rel", "rank_rel", "cond_max"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        if not self.rank_rel < self.op_rel < 1:
            raise ValueError("tolerances must satisfy rank_rel < op_rel < 1")

    def with_overrides(self, **overrides) -> "Tolerances":
        """Return a copy with the non-None overrides applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


DEFAULT_TOL = Tolerances()


def as_matrix(data, *, name: str = "matrix") -> np.ndarray:
    """Convert ``data`` to a finite 2-D float array (read-only copy)."""
    arr = np.array(data, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of R^n held as an n x k matrix with orthonormal columns."""

    basis: np.ndarray
    _projector: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        basis = _frozen(self.basis)
        if basis.ndim != 2 or basis.shape[1] < 1 or basis.shape[1] > basis.shape[0]:
            raise DimensionMismatch(f"basis must be n x k with 1 <= k <= n, got {basis.shape}")
        gram_err = np.linalg.norm(basis.T @ basis - np.eye(basis.shape[1]))
        if gram_err > 1e-8:
            raise ValueError(f"basis columns are not orthonormal (error {gram_err:.2e})")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_projector", _frozen(basis @ basis.T))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @property
    def generator(self) -> np.ndarray:
        """Unit generator of a line (first basis column)."""
        return self.basis[:, 0]

    def __repr__(self):
        return f"Subspace(n={self.ambient_dim}, rank={self.rank})"


def _sign_fixed_qr(A: np.ndarray) -> np.ndarray:
    Q, R = np.linalg.qr(A)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def numerical_rank(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> int:
    s = np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.rank_rel * s[0] * max(M.shape)))


def orthonormalize(vectors: Iterable[Sequence[float]], tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis for the span of ``vectors``.

    Linearly independent input keeps its order (Gram-Schmidt via QR, so the
    first basis column is the first input normalised); dependent input falls
    back to the leading left singular vectors.
    """
    vecs = [np.asarray(v, dtype=float).ravel() for v in vectors]
    if not vecs:
        raise ZeroSpan("no vectors given")
    n = vecs[0].size
    if n < 1 or any(v.size != n for v in vecs):
        raise DimensionMismatch("vectors must share a common length n >= 1")
    A = np.column_stack(vecs)
    if not np.all(np.isfinite(A)):
        raise ValueError("vectors contain non-finite entries")
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    if s[0] == 0.0:
        raise ZeroSpan("all vectors are zero")
    r = int(np.sum(s > tol.rank_rel * s[0] * n))
    if r == 0:
        raise ZeroSpan("all vectors are numerically zero")
    if r == A.shape[1]:
        return Subspace(_sign_fixed_qr(A))
    basis = U[:, :r].copy()
    if r == 1:
        norms = np.linalg.norm(A, axis=0)
        first = A[:, int(np.argmax(norms > tol.rank_rel * s[0] * n))]
        if basis[:, 0] @ first < 0:
            basis = -basis
    return Subspace(basis)


def subspace_from_basis(basis, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthonormalise the columns of an n x k matrix."""
    B = np.asarray(basis, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    return orthonormalize(list(B.T), tol)


def projector(S: Subspace) -> np.ndarray:
    """Orthogonal projector onto ``S``."""
    return S._projector


def condition_number(U: np.ndarray) -> float:
    s = np.linalg.svd(U, compute_uv=False)
    return float(np.inf) if s[-1] == 0.0 else float(s[0] / s[-1])


def check_invertible(U, tol: Tolerances = DEFAULT_TOL, *, n: int | None = None) -> np.ndarray:
    U = as_matrix(U, name="operator")
    if U.shape[0] != U.shape[1]:
        raise DimensionMismatch(f"operator must be square, got {U.shape}")
    if n is not None and U.shape[0] != n:
        raise DimensionMismatch(f"operator is {U.shape[0]}x{U.shape[0]}, expected {n}x{n}")
    cond = condition_number(U)
    if not cond <= tol.cond_max:
        raise SingularOperator(f"condition number {cond:.3e} exceeds {tol.cond_max:.1e}")
    return U


def map_subspace(U, S: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """The image ``U S`` of a subspace under an invertible operator."""
    U = check_invertible(U, tol, n=S.ambient_dim)
    return Subspace(_sign_fixed_qr(U @ S.basis))


def contains(big: Subspace, small: Subspace, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when ``small`` lies inside ``big`` up to tolerance."""
    _same_ambient(big, small)
    resid = small.basis - big._projector @ small.basis
    return bool(np.linalg.norm(resid) <= tol.op_rel * np.sqrt(big.ambient_dim))


@dataclass(frozen=True)
class SubspaceRelation:
    kind: str  # "equal" | "orthogonal" | "neither"
    principal_angles: np.ndarray
    distance: float
    overlap: float

    @property
    def equal(self) -> bool:
        return self.kind == "equal"

    @property
    def orthogonal(self) -> bool:
        return self.kind == "orthogonal"


def _same_ambient(S1: Subspace, S2: Subspace):
    if S1.ambient_dim != S2.ambient_dim:
        raise DimensionMismatch(
            f"subspaces live in R^{S1.ambient_dim} and R^{S2.ambient_dim}"
        )


def principal_angles(S1: Subspace, S2: Subspace) -> np.ndarray:
    _same_ambient(S1, S2)
    cos = np.linalg.svd(S1.basis.T @ S2.basis, compute_uv=False)
    return np.arccos(np.clip(cos, 0.0, 1.0))


def subspace_relation(S1: Subspace, S2: Subspace, tol: Tolerances = DEFAULT_TOL) -> SubspaceRelation:
    """Classify two subspaces as equal, orthogonal or neither."""
    _same_ambient(S1, S2)
    P1, P2 = S1._projector, S2._projector
    thresh = tol.op_rel * np.sqrt(S1.ambient_dim)
    distance = float(np.linalg.norm(P1 - P2))
    overlap = float(np.linalg.norm(P1 @ P2))
    if distance <= thresh:
        kind = "equal"
    elif overlap <= thresh:
        kind = "orthogonal"
    else:
        kind = "neither"
    return SubspaceRelation(kind, principal_angles(S1, S2), distance, overlap)


def _check_spd(M, tol: Tolerances):
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise NotSPD(f"matrix must be square, got {M.shape}")
    norm = np.linalg.norm(M)
    if np.linalg.norm(M - M.T) > tol.op_rel * norm:
        raise NotSPD("matrix is not symmetric")
    w, V = np.linalg.eigh((M + M.T) / 2)
    if not w[-1] > 0 or w[0] <= tol.rank_rel * w[-1]:
        raise NotSPD(f"matrix is not positive definite (eigenvalues in [{w[0]:.3e}, {w[-1]:.3e}])")
    return w, V


def spd_power(M, power: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``M**power`` for symmetric positive definite ``M`` via eigendecomposition."""
    w, V = _check_spd(M, tol)
    R = (V * w**power) @ V.T
    return (R + R.T) / 2


def spd_inverse_sqrt(M, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    return spd_power(M, -0.5, tol)


def spd_sqrt(M, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    return spd_power(M, 0.5, tol)


def null_space_dim(M, tol: Tolerances = DEFAULT_TOL) -> int:
    """Dimension of the null space of ``M`` (columns minus numerical rank)."""
    M = as_matrix(M)
    return M.shape[1] - numerical_rank(M, tol)


def is_orthogonal_matrix(E, tol: Tolerances = DEFAULT_TOL) -> bool:
    E = np.asarray(E, dtype=float)
    if E.ndim != 2 or E.shape[0] != E.shape[1]:
        return False
    return bool(np.linalg.norm(E.T @ E - np.eye(E.shape[0])) <= tol.op_rel * np.sqrt(E.shape[0]))
