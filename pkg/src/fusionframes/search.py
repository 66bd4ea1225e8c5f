"""Numerical scalability solvers.

``weight_only_solve`` is the convex problem over weights alone (U = I),
solved exactly by nonnegative least squares. ``search_operator_scaling`` is
a multi-start Levenberg-Marquardt descent over (U, gamma) with a
finite-difference Jacobian; it can find scalings but never proves their
absence.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from .errors import FusionFrameError, NotOneExcess
from .frame import FusionFrame, excess, frame_operator
from .linalg import DEFAULT_TOL, Tolerances, check_invertible, condition_number, projector, spd_inverse_sqrt
from .riesz import ScalingPair, parseval_threshold, scaled_operator, verify_scaling


@dataclass(frozen=True)
class SearchOptions:
    restarts: int = 16
    max_iters: int = 500
    seed: int = 0
    step_tol: float = 1e-12
    structural: bool = False

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be at least 1")
        if not self.step_tol > 0:
            raise ValueError("step_tol must be positive")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")

    def replace(self, **changes) -> "SearchOptions":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class SearchResult:
    best: ScalingPair
    residual: float
    converged: bool
    evaluations: int
    seed: int
    restart_index: int | None = None
    partition: tuple | None = None
    history: tuple = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "residual": self.residual, "converged": self.converged,
            "evaluations": self.evaluations, "seed": self.seed,
            "restart_index": self.restart_index,
            "partition": None if self.partition is None else [list(p) for p in self.partition],
            "scaling": self.best.to_dict(),
        }


def objective(F: FusionFrame, sc: ScalingPair, tol: Tolerances = DEFAULT_TOL) -> float:
    """||S_{U W_gamma} - I||_F^2."""
    S = scaled_operator(F, sc, tol)
    return float(np.sum((S - np.eye(F.ambient_dim)) ** 2))


def objective_gradient(F: FusionFrame, sc: ScalingPair, tol: Tolerances = DEFAULT_TOL):
    """Central-difference gradient of ``objective`` in U and in gamma."""
    U = check_invertible(sc.U, tol, n=F.ambient_dim)
    g = sc.gammas
    x = np.concatenate([U.ravel(), g])
    h = 1e-6 * (1 + np.abs(x))
    fn = _Residual(F)
    n = F.ambient_dim
    X = np.concatenate([x + np.diag(h), x - np.diag(h)])
    vals = fn.batch(X[:, : n * n].reshape(-1, n, n), X[:, n * n:] ** 2)
    f = np.sum(vals ** 2, axis=1)
    grad = (f[: x.size] - f[x.size:]) / (2 * h)
    return grad[: n * n].reshape(n, n), grad[n * n:]


# -- weights only ---------------------------------------------------------------

@dataclass(frozen=True)
class WeightSolveResult:
    u: np.ndarray
    gammas: np.ndarray
    dropped: tuple[int, ...]
    residual: float
    kkt_residual: float
    weight_scalable: bool

    @property
    def strictly_scalable(self) -> bool:
        """Parseval with every member kept at a positive weight."""
        return self.weight_scalable and not self.dropped

    def to_dict(self) -> dict:
        return {"u": self.u.tolist(), "gammas": self.gammas.tolist(),
                "dropped": list(self.dropped), "residual": self.residual,
                "kkt_residual": self.kkt_residual,
                "weight_scalable": self.weight_scalable,
                "strictly_scalable": self.strictly_scalable,
                "subframe": bool(self.dropped)}


def weight_only_solve(F: FusionFrame, tol: Tolerances = DEFAULT_TOL) -> WeightSolveResult:
    """Minimise ||sum_i u_i w_i^2 P_i - I||_F over u >= 0.

    Zero entries of u mean the member is dropped; ``gammas`` holds sqrt(u)
    with zeros for dropped members. The KKT residual certifies optimality.
    """
    n = F.ambient_dim
    A = np.column_stack([m.weight**2 * projector(m.subspace).ravel() for m in F.members])
    b = np.eye(n).ravel()
    u, rnorm = nnls(A, b)
    grad = A.T @ (A @ u - b)
    active = u > 0
    kkt = max(float(np.max(np.abs(grad[active]), initial=0.0)),
              float(np.max(-grad[~active], initial=0.0)))
    dropped = tuple(int(i) for i in np.flatnonzero(~active))
    residual = float(rnorm)
    return WeightSolveResult(u, np.sqrt(u), dropped, residual, kkt,
                             bool(residual <= parseval_threshold(n, tol)))


# -- local search ---------------------------------------------------------------

class _Residual:
    """Vectorised r(U, gamma) = vec(sum_i (w_i gamma_i)^2 P_{U W_i} - I)."""

    def __init__(self, F: FusionFrame):
        self.n = F.ambient_dim
        self.bases = [m.subspace.basis for m in F.members]
        self.w2 = F.weights ** 2
        self.evaluations = 0

    def batch(self, Us: np.ndarray, g2: np.ndarray) -> np.ndarray:
        """Us: (B, n, n); g2: (B, m) squared gammas. Returns (B, n*n)."""
        self.evaluations += Us.shape[0]
        S = np.zeros((Us.shape[0], self.n, self.n))
        for i, Q in enumerate(self.bases):
            Y, _ = np.linalg.qr(Us @ Q)
            S += (self.w2[i] * g2[:, i])[:, None, None] * (Y @ np.swapaxes(Y, 1, 2))
        S -= np.eye(self.n)
        return S.reshape(Us.shape[0], -1)


def _unpack(x, n):
    return x[: n * n].reshape(n, n), np.exp(x[n * n:])


def _levenberg_marquardt(fn: _Residual, x0: np.ndarray, opts: SearchOptions,
                         tol: Tolerances, target: float):
    n = fn.n
    p = x0.size

    def resid(x):
        U, g = _unpack(x, n)
        return fn.batch(U[None], (g**2)[None])[0]

    x = x0.copy()
    r = resid(x)
    f = float(r @ r)
    history = [f]
    lam = 1e-3
    stall = 0
    for _ in range(opts.max_iters):
        if np.sqrt(f) <= target:
            break
        h = 1e-6 * (1 + np.abs(x))
        X = np.concatenate([x + np.diag(h), x - np.diag(h)])
        U, g = X[:, : n * n].reshape(-1, n, n), np.exp(X[:, n * n:])
        R = fn.batch(U, g**2)
        J = ((R[:p] - R[p:]) / (2 * h)[:, None]).T
        JtJ, Jtr = J.T @ J, J.T @ r
        accepted = False
        while lam < 1e12:
            step = np.linalg.solve(JtJ + lam * (np.diag(np.diag(JtJ)) + np.eye(p)), -Jtr)
            xn = x + step
            Un, _ = _unpack(xn, n)
            if condition_number(Un) <= tol.cond_max:
                rn = resid(xn)
                fnew = float(rn @ rn)
                if fnew < f:
                    accepted = True
                    break
            lam *= 4
        if not accepted:
            break
        lam = max(lam / 3, 1e-12)
        # projectors ignore the scale of U, so keep it normalised
        Un = Un / (np.linalg.norm(Un) / np.sqrt(n))
        xn[: n * n] = Un.ravel()
        stall = stall + 1 if f - fnew <= 1e-12 * f else 0
        x, r, f = xn, rn, fnew
        history.append(f)
        if np.linalg.norm(step) <= opts.step_tol * (1 + np.linalg.norm(x)) or stall >= 10:
            break
    return x, f, history


def _starts(F: FusionFrame, opts: SearchOptions, tol: Tolerances):
    n = F.ambient_dim
    rng = np.random.default_rng(opts.seed)
    w = F.weights
    ws = weight_only_solve(F, tol)
    yield np.eye(n), np.maximum(ws.gammas, 1e-2)
    try:
        root = spd_inverse_sqrt(frame_operator(F), tol)
    except FusionFrameError:
        root = np.eye(n)
    yield root, 1.0 / w
    while True:
        U = root @ (np.eye(n) + 0.5 * rng.standard_normal((n, n)))
        if condition_number(U) > 1e3:
            continue
        yield U, np.exp(0.3 * rng.standard_normal(len(F))) / w


def structural_scaling(F: FusionFrame, tol: Tolerances = DEFAULT_TOL):
    """Try the line/Riesz splits of a 1-excess frame; (pair, split) or None."""
    from .one_excess import candidate_partitions, partition_scaler

    if excess(F, tol) != 1:
        raise NotOneExcess("structural scalings apply to 1-excess frames")
    for I1, I2 in candidate_partitions(F, tol):
        if not I1:
            continue
        try:
            sc = partition_scaler(F, I1, I2, tol)
        except FusionFrameError:
            continue
        if verify_scaling(F, sc, tol).is_parseval:
            return sc, (I1, I2)
    return None


def search_operator_scaling(F: FusionFrame, opts: SearchOptions | None = None,
                            tol: Tolerances = DEFAULT_TOL) -> SearchResult:
    """Multi-start local search for a Parseval (U, gamma) scaling.

    With ``opts.structural`` and a 1-excess frame, explicit scalers for the
    line/Riesz splits are tried before any descent.
    """
    opts = opts or SearchOptions()
    n = F.ambient_dim
    target = parseval_threshold(n, tol)
    evaluations = 0

    if opts.structural and excess(F, tol) == 1:
        found = structural_scaling(F, tol)
        if found is not None:
            sc, part = found
            res = verify_scaling(F, sc, tol).residual
            return SearchResult(sc, res, True, 0, opts.seed, None, part)

    fn = _Residual(F)
    best = None
    starts = _starts(F, opts, tol)
    for k in range(opts.restarts):
        U0, g0 = next(starts)
        U0 = U0 / (np.linalg.norm(U0) / np.sqrt(n))
        x0 = np.concatenate([U0.ravel(), np.log(g0)])
        x, f, hist = _levenberg_marquardt(fn, x0, opts, tol, target)
        U, g = _unpack(x, n)
        sc = ScalingPair(U, g)
        res = verify_scaling(F, sc, tol).residual
        if best is None or res < best[1]:
            best = (sc, res, k, tuple(hist))
        if res <= target:
            break
    sc, res, k, hist = best
    return SearchResult(sc, res, bool(res <= target), fn.evaluations, opts.seed, k, None, hist)
