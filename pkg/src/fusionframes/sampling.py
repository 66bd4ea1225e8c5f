"""Seeded random instances for property checks and demos."""

from __future__ import annotations

import numpy as np

from .frame import FusionFrame
from .linalg import Subspace, condition_number


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def random_invertible(n: int, rng: np.random.Generator, max_cond: float = 50.0) -> np.ndarray:
    """Gaussian matrix conditioned to at most ``max_cond``."""
    while True:
        U = rng.standard_normal((n, n))
        if condition_number(U) <= max_cond:
            return U


def random_subspace(n: int, k: int, rng: np.random.Generator) -> Subspace:
    Q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    return Subspace(Q)


def random_composition(n: int, rng: np.random.Generator, max_parts: int | None = None) -> list[int]:
    """Random ordered partition of n into positive parts."""
    max_parts = n if max_parts is None else min(max_parts, n)
    parts = int(rng.integers(1, max_parts + 1))
    cuts = np.sort(rng.choice(np.arange(1, n), size=parts - 1, replace=False)) if parts > 1 else []
    bounds = [0, *cuts, n]
    return [int(b - a) for a, b in zip(bounds[:-1], bounds[1:])]


def random_weights(m: int, rng: np.random.Generator, low: float = 0.5, high: float = 2.0) -> np.ndarray:
    return rng.uniform(low, high, size=m)


def random_riesz_basis(n: int, rng: np.random.Generator, *, unit_weights: bool = False,
                       max_cond: float = 20.0, min_parts: int = 1) -> FusionFrame:
    """Split the columns of a well-conditioned invertible matrix into subspaces."""
    while True:
        ks = random_composition(n, rng)
        if len(ks) >= min(min_parts, n):
            break
    T = random_invertible(n, rng, max_cond)
    spans, start = [], 0
    for k in ks:
        spans.append(list(T[:, start:start + k].T))
        start += k
    weights = None if unit_weights else random_weights(len(ks), rng)
    return FusionFrame.from_spans(spans, weights)


def random_frame(n: int, m: int, rng: np.random.Generator, *, unit_weights: bool = False,
                 max_rank: int | None = None) -> FusionFrame:
    max_rank = n if max_rank is None else max_rank
    subs = [random_subspace(n, int(rng.integers(1, max_rank + 1)), rng) for _ in range(m)]
    weights = None if unit_weights else random_weights(m, rng)
    return FusionFrame.from_subspaces(subs, weights)


def line_frame(theta: float, psi: float) -> FusionFrame:
    """Lines through (1,0), (cos theta, sin theta), (cos psi, sin psi) in R^2."""
    return FusionFrame.from_spans([[[1.0, 0.0]],
                                   [[np.cos(theta), np.sin(theta)]],
                                   [[np.cos(psi), np.sin(psi)]]])


def random_admissible_angles(rng: np.random.Generator, margin: float = 0.05) -> tuple[float, float]:
    """Angle pair 0 <= theta <= psi <= pi away from the degenerate corners."""
    corners = [(0.0, 0.0), (0.0, np.pi), (np.pi, np.pi)]
    while True:
        theta, psi = np.sort(rng.uniform(0.0, np.pi, size=2))
        if all(np.hypot(theta - a, psi - b) > margin for a, b in corners):
            return float(theta), float(psi)
