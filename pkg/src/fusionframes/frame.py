"""Fusion frames and their first-order analysis."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, LocalSpanMismatch, NotAFrame
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerances,
    map_subspace,
    null_space_dim,
    orthonormalize,
    projector,
    subspace_relation,
)


@dataclass(frozen=True)
class WeightedSubspace:
    subspace: Subspace
    weight: float

    def __post_init__(self):
        w = float(self.weight)
        if not np.isfinite(w) or w <= DEFAULT_TOL.rank_rel:
            raise ValueError(f"weights must be strictly positive, got {self.weight!r}")
        object.__setattr__(self, "weight", w)


class FusionFrame:
    """An ordered, finite family of weighted subspaces of R^n.

    Instances are immutable; methods that "modify" a frame return a new one.
    """

    __slots__ = ("_members", "_n")

    def __init__(self, members: Iterable[WeightedSubspace]):
        members = tuple(members)
        if not members:
            raise ValueError("a fusion frame needs at least one subspace")
        n = members[0].subspace.ambient_dim
        for m in members:
            if m.subspace.ambient_dim != n:
                raise DimensionMismatch("all subspaces must share the ambient dimension")
        object.__setattr__(self, "_members", members)
        object.__setattr__(self, "_n", n)

    def __setattr__(self, name, value):
        raise AttributeError("FusionFrame is immutable")

    @classmethod
    def from_spans(cls, spans: Sequence[Sequence[Sequence[float]]], weights=None,
                   tol: Tolerances = DEFAULT_TOL) -> "FusionFrame":
        """Build a frame from spanning vectors; ``weights`` default to 1."""
        if weights is None:
            weights = [1.0] * len(spans)
        if len(weights) != len(spans):
            raise DimensionMismatch("one weight per subspace is required")
        return cls(WeightedSubspace(orthonormalize(vs, tol), w) for vs, w in zip(spans, weights))

    @classmethod
    def from_subspaces(cls, subspaces: Sequence[Subspace], weights=None) -> "FusionFrame":
        if weights is None:
            weights = [1.0] * len(subspaces)
        if len(weights) != len(subspaces):
            raise DimensionMismatch("one weight per subspace is required")
        return cls(WeightedSubspace(s, w) for s, w in zip(subspaces, weights))

    @property
    def members(self) -> tuple[WeightedSubspace, ...]:
        return self._members

    @property
    def ambient_dim(self) -> int:
        return self._n

    @property
    def subspaces(self) -> list[Subspace]:
        return [m.subspace for m in self._members]

    @property
    def weights(self) -> np.ndarray:
        return np.array([m.weight for m in self._members])

    @property
    def ranks(self) -> list[int]:
        return [m.subspace.rank for m in self._members]

    def __len__(self):
        return len(self._members)

    def __getitem__(self, i) -> WeightedSubspace:
        return self._members[i]

    def __repr__(self):
        return f"FusionFrame(n={self._n}, ranks={self.ranks}, weights={self.weights.tolist()})"

    def with_weights(self, weights) -> "FusionFrame":
        return FusionFrame.from_subspaces(self.subspaces, list(weights))

    def mapped(self, U, tol: Tolerances = DEFAULT_TOL) -> "FusionFrame":
        """The frame {(U W_i, w_i)}."""
        return FusionFrame(WeightedSubspace(map_subspace(U, m.subspace, tol), m.weight)
                           for m in self._members)

    def subframe(self, indices: Iterable[int]) -> "FusionFrame":
        return FusionFrame(self._members[i] for i in indices)


@dataclass(frozen=True)
class FrameAnalysis:
    frame_operator: np.ndarray
    lower_bound: float
    upper_bound: float
    excess: int
    is_frame: bool
    is_tight: bool
    is_parseval: bool
    is_riesz_basis: bool
    is_orthogonal_basis: bool
    is_riesz_decomposition: bool

    def to_dict(self) -> dict:
        return {
            "bounds": [self.lower_bound, self.upper_bound],
            "excess": self.excess,
            "is_frame": self.is_frame,
            "is_tight": self.is_tight,
            "is_parseval": self.is_parseval,
            "is_riesz_basis": self.is_riesz_basis,
            "is_orthogonal_basis": self.is_orthogonal_basis,
            "is_riesz_decomposition": self.is_riesz_decomposition,
            "frame_operator": self.frame_operator.tolist(),
        }


def frame_operator(F: FusionFrame) -> np.ndarray:
    """S = sum_i w_i^2 P_i."""
    S = np.zeros((F.ambient_dim, F.ambient_dim))
    for m in F.members:
        S += m.weight**2 * projector(m.subspace)
    return (S + S.T) / 2


def frame_bounds(F: FusionFrame) -> tuple[float, float]:
    """Optimal bounds (A, B): extreme eigenvalues of the frame operator."""
    w = np.linalg.eigvalsh(frame_operator(F))
    return max(float(w[0]), 0.0), float(w[-1])


def _is_frame(A: float, B: float, tol: Tolerances) -> bool:
    return A > tol.rank_rel * B


def synthesis_matrix(F: FusionFrame) -> np.ndarray:
    """n x sum(k_i) matrix whose i-th block is w_i times the basis of W_i."""
    return np.hstack([m.weight * m.subspace.basis for m in F.members])


def excess(F: FusionFrame, tol: Tolerances = DEFAULT_TOL) -> int:
    return null_space_dim(synthesis_matrix(F), tol)


def _inverse_frame_operator(F: FusionFrame, tol: Tolerances) -> np.ndarray:
    S = frame_operator(F)
    A, B = frame_bounds(F)
    if not _is_frame(A, B, tol):
        raise NotAFrame(f"frame operator is singular (A={A:.3e}, B={B:.3e})")
    Sinv = np.linalg.inv(S)
    return (Sinv + Sinv.T) / 2


def canonical_dual(F: FusionFrame, tol: Tolerances = DEFAULT_TOL) -> FusionFrame:
    """{(S^-1 W_i, w_i)}."""
    Sinv = _inverse_frame_operator(F, tol)
    return F.mapped(Sinv, tol)


def riesz_residuals(F: FusionFrame, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Matrix of ||w_i^2 P_i S^-1 P_j - delta_ij P_j||_F over all pairs."""
    Sinv = _inverse_frame_operator(F, tol)
    Ps = [projector(s) for s in F.subspaces]
    w = F.weights
    m = len(F)
    out = np.empty((m, m))
    for i in range(m):
        left = w[i] ** 2 * Ps[i] @ Sinv
        for j in range(m):
            out[i, j] = np.linalg.norm(left @ Ps[j] - (Ps[j] if i == j else 0.0))
    return out


def is_riesz_basis(F: FusionFrame, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Riesz test through the projector identities, cross-checked with the excess."""
    ok = bool(np.all(riesz_residuals(F, tol) <= tol.op_rel * np.sqrt(F.ambient_dim)))
    if ok != (excess(F, tol) == 0):
        warnings.warn("Riesz projector test and excess disagree; frame is ill-conditioned",
                      RuntimeWarning, stacklevel=2)
    return ok


def pairwise_orthogonal(subspaces: Sequence[Subspace], tol: Tolerances = DEFAULT_TOL) -> bool:
    for i in range(len(subspaces)):
        for j in range(i + 1, len(subspaces)):
            if not subspace_relation(subspaces[i], subspaces[j], tol).orthogonal:
                return False
    return True


def classify(F: FusionFrame, tol: Tolerances = DEFAULT_TOL) -> FrameAnalysis:
    S = frame_operator(F)
    A, B = frame_bounds(F)
    n = F.ambient_dim
    e = excess(F, tol)
    thresh = tol.op_rel * np.sqrt(n)
    is_frame = _is_frame(A, B, tol)
    is_parseval = bool(np.linalg.norm(S - np.eye(n)) <= thresh)
    is_tight = is_frame and (is_parseval or (B - A) <= thresh * B)
    is_riesz = is_frame and e == 0
    orth_basis = (is_parseval and bool(np.all(np.abs(F.weights - 1.0) <= tol.op_rel))
                  and pairwise_orthogonal(F.subspaces, tol))
    return FrameAnalysis(
        frame_operator=S,
        lower_bound=A,
        upper_bound=B,
        excess=e,
        is_frame=is_frame,
        is_tight=is_tight,
        is_parseval=is_parseval,
        is_riesz_basis=is_riesz,
        is_orthogonal_basis=orth_basis,
        is_riesz_decomposition=is_riesz,
    )


def local_frame(F: FusionFrame, local_bases=None, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Stack the weighted local vectors {w_i f_ij} as columns of an n x N array.

    ``local_bases`` is None (orthonormal bases everywhere) or one entry per
    member: a list of spanning vectors, or None for the orthonormal default.
    """
    if local_bases is None:
        local_bases = [None] * len(F)
    if len(local_bases) != len(F):
        raise DimensionMismatch("one local family per member is required")
    cols = []
    for i, (m, family) in enumerate(zip(F.members, local_bases)):
        if family is None:
            vecs = m.subspace.basis
        else:
            vecs = np.column_stack([np.asarray(v, dtype=float) for v in family])
            if vecs.shape[0] != F.ambient_dim:
                raise DimensionMismatch(f"local family {i} has wrong vector length")
            spanned = orthonormalize(list(vecs.T), tol)
            if not subspace_relation(spanned, m.subspace, tol).equal:
                raise LocalSpanMismatch(f"local family {i} does not span its subspace")
        cols.append(m.weight * vecs)
    return np.hstack(cols)


def reconstruct(F: FusionFrame, f, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """sum_i w_i^2 S^-1 P_i f."""
    f = np.asarray(f, dtype=float)
    if f.shape != (F.ambient_dim,):
        raise DimensionMismatch(f"vector must have length {F.ambient_dim}")
    Sinv = _inverse_frame_operator(F, tol)
    out = np.zeros(F.ambient_dim)
    for m in F.members:
        out += m.weight**2 * (Sinv @ (projector(m.subspace) @ f))
    return out
